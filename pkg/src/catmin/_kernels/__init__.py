"""Kernel backend selection.

The hot loops (closed-form cone / glued-plane metric operations) exist twice:
a Cython extension (``catmin._kernels._core``) and a pure-numpy fallback with
the same call surface.  The compiled core is used when importable; set
``CATMIN_PURE_PYTHON=1`` to force the fallback (used by the benchmark and the
equivalence tests).
"""

import os

from . import fallback

if os.environ.get("CATMIN_PURE_PYTHON"):
    impl = fallback
else:
    try:
        from . import _core as impl  # type: ignore[no-redef]
    except ImportError:
        impl = fallback

BACKEND = impl.BACKEND

cone_dist = impl.cone_dist
cone_geo = impl.cone_geo
glued_dist = impl.glued_dist
glued_geo = impl.glued_geo
