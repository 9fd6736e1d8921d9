"""Exception types shared across the toolkit."""


class CatminError(Exception):
    """Base class for all catmin errors."""


class InvalidChart(CatminError):
    """A point references a chart that does not exist in its space."""


class GeodesicNotResolved(CatminError):
    """Shortest-path search failed to converge at the requested tolerance."""


class DegenerateQuery(CatminError):
    """Angle query with a probe radius exceeding a geodesic length."""


class NotTwoDimensional(CatminError):
    """Link length requested in a space that is not two-dimensional."""


class NoConvergence(CatminError):
    """Iteration hit its cap; carries the best iterate and residual."""

    def __init__(self, message, best=None, residual=None):
        super().__init__(message)
        self.best = best
        self.residual = residual


class DegenerateVertex(CatminError):
    """Consecutive curve vertices coincide."""


class SamplerFailure(CatminError):
    """A user-supplied curve sampler raised or returned garbage."""


class SingularSystem(CatminError):
    """Degenerate domain triangle in a pull-back form solve."""


class InvalidCurve(CatminError):
    """Curve unusable for the requested operation (e.g. zero length)."""


class RadiusTooLarge(CatminError):
    """Requested radius reaches the boundary of the valid region."""


class BoundaryMismatch(CatminError):
    """Solved boundary does not lie on the expected curve."""


class DegenerateAngle(CatminError):
    """Funnel sector angle came out negative; upstream angle data is broken."""


class SceneParseError(CatminError):
    """Scene or curve description file is malformed."""
