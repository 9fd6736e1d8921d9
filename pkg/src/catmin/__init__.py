"""catmin: discrete Plateau problems and minimal-surface structure checks in
piecewise-flat CAT(0) target spaces."""

from ._kernels import BACKEND as kernel_backend
from .curve import (CurvatureReport, PolygonalCurve, arc_length_param,
                    curve_from_dict, inscribe, total_curvature)
from .mesh import (DiscMesh, MeshMap, PullbackForm, PullbackMetric,
                   generate_disc_mesh, map_area, max_stretch_energy,
                   pullback_form, trace_energy)
from .space import (AngleQuery, Euclidean, EuclideanCone, GluedPlanes, Point,
                    TargetSpace, frechet_mean, space_from_dict, verify_cat0)
from .solve import (SolveResult, SolverConfig, radial_cone_fill,
                    refine_and_resolve, solve_plateau)

__version__ = "0.1.0"

__all__ = [
    "AngleQuery", "CurvatureReport", "DiscMesh", "Euclidean", "EuclideanCone",
    "GluedPlanes", "MeshMap", "Point", "PolygonalCurve", "PullbackForm",
    "PullbackMetric", "SolveResult", "SolverConfig", "TargetSpace",
    "arc_length_param", "curve_from_dict", "frechet_mean", "generate_disc_mesh",
    "inscribe", "kernel_backend", "map_area", "max_stretch_energy",
    "pullback_form", "radial_cone_fill", "refine_and_resolve", "solve_plateau",
    "space_from_dict", "total_curvature", "trace_energy", "verify_cat0",
]
