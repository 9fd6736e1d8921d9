"""Build hook for the optional compiled kernel core.

If Cython or a C toolchain is unavailable the package installs pure-Python;
the kernels fall back automatically at import time.
"""

from setuptools import setup

ext_modules = []
try:
    import numpy as np
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [Extension("catmin._kernels._core",
                   ["src/catmin/_kernels/_core.pyx"],
                   include_dirs=[np.get_include()],
                   define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")])],
        language_level=3)
except ImportError:
    pass

setup(ext_modules=ext_modules)
