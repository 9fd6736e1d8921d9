"""Closed polygonal curves in a target space: total curvature, inscription,
constant-speed parametrization."""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateVertex, InvalidCurve, SamplerFailure, SceneParseError
from .space import AngleQuery, Point, TWO_PI


@dataclass
class CurvatureReport:
    kappa: float
    turning_angles: list
    fenchel_ok: bool
    vertex_angles: list = field(default_factory=list)

    def to_dict(self):
        return {"kappa": self.kappa, "kappa_over_pi": self.kappa / math.pi,
                "turning_angles": self.turning_angles,
                "vertex_angles": self.vertex_angles,
                "fenchel_ok": self.fenchel_ok}


class PolygonalCurve:
    """Closed ordered vertex list; edges are the unique geodesics between
    consecutive vertices."""

    def __init__(self, space, vertices, check=True):
        if len(vertices) < 3:
            raise InvalidCurve("need at least 3 vertices")
        self.space = space
        self.vertices = list(vertices)
        self.enc = space.encode(self.vertices)
        nxt = np.roll(self.enc, -1, axis=0)
        self.edge_lengths = space.dist_enc(self.enc, nxt)
        if check and np.any(self.edge_lengths <= 0.0):
            raise DegenerateVertex("consecutive vertices coincide")
        self.total_length = float(self.edge_lengths.sum())
        if self.total_length <= 0.0:
            raise InvalidCurve("zero-length curve")
        self.cum_lengths = np.concatenate([[0.0], np.cumsum(self.edge_lengths)])

    def __len__(self):
        return len(self.vertices)

    @property
    def k(self):
        return len(self.vertices)

    def diameter(self):
        d = 0.0
        n = len(self.vertices)
        idx = np.arange(n)
        for shift in range(1, n // 2 + 1):
            dd = self.space.dist_enc(self.enc, self.enc[np.roll(idx, -shift)])
            d = max(d, float(dd.max()))
        return d

    def point_at(self, t):
        """Constant-speed parametrization; t in [0, 1), t=0 at vertices[0]."""
        return self.points_at(np.array([t]))[0]

    def points_at(self, ts):
        ts = np.asarray(ts, float) % 1.0
        s = ts * self.total_length
        edge = np.clip(np.searchsorted(self.cum_lengths, s, side="right") - 1,
                       0, self.k - 1)
        local = (s - self.cum_lengths[edge]) / self.edge_lengths[edge]
        a = self.enc[edge]
        b = self.enc[(edge + 1) % self.k]
        out = self.space.geo_enc(a, b, local)
        return self.space.decode(out)

    def points_at_enc(self, ts):
        ts = np.asarray(ts, float) % 1.0
        s = ts * self.total_length
        edge = np.clip(np.searchsorted(self.cum_lengths, s, side="right") - 1,
                       0, self.k - 1)
        local = (s - self.cum_lengths[edge]) / self.edge_lengths[edge]
        return self.space.geo_enc(self.enc[edge], self.enc[(edge + 1) % self.k], local), edge

    def edge_of_param(self, t):
        s = (float(t) % 1.0) * self.total_length
        return int(np.clip(np.searchsorted(self.cum_lengths, s, side="right") - 1,
                           0, self.k - 1))

    def min_edge_separation(self, samples_per_edge=8):
        """Sampled separation between non-adjacent edges (simplicity check;
        flagged, not enforced)."""
        n = self.k
        ts = (np.arange(samples_per_edge) + 0.5) / samples_per_edge
        pts = []
        for i in range(n):
            a = np.repeat(self.enc[i:i + 1], samples_per_edge, axis=0)
            b = np.repeat(self.enc[(i + 1) % n:(i + 1) % n + 1], samples_per_edge, axis=0)
            pts.append(self.space.geo_enc(a, b, ts))
        sep = math.inf
        for i in range(n):
            for j in range(i + 1, n):
                if j == i + 1 or (i == 0 and j == n - 1):
                    continue  # adjacent edges share a vertex
                A = np.repeat(pts[i], samples_per_edge, axis=0)
                B = np.tile(pts[j], (samples_per_edge, 1))
                sep = min(sep, float(self.space.dist_enc(A, B).min()))
        return sep

    def is_simple(self, tol=None, samples_per_edge=8):
        sep = self.min_edge_separation(samples_per_edge)
        if tol is None:
            tol = 1e-9 * self.total_length
        return sep > tol

    def rotated(self, shift):
        return PolygonalCurve(self.space,
                              self.vertices[shift:] + self.vertices[:shift])

    def reversed_(self):
        return PolygonalCurve(self.space, list(reversed(self.vertices)))

    def to_dict(self):
        return {"points": [v.to_dict() for v in self.vertices]}


def total_curvature(space, curve: PolygonalCurve) -> CurvatureReport:
    """Sum of turning angles pi - angle(x_{i-1}, x_i, x_{i+1}).

    For a polygon the supremum over inscribed polygons is attained at the
    polygon itself, so the vertex-angle sum is the exact value.  Turning
    angles are clamped to [0, pi] against extrapolation noise at singular
    vertices.
    """
    n = curve.k
    angles = []
    turnings = []
    for i in range(n):
        q = curve.vertices[i]
        x = curve.vertices[(i - 1) % n]
        y = curve.vertices[(i + 1) % n]
        ang = space.upper_angle(AngleQuery(q, x, y))
        angles.append(ang)
        turnings.append(min(max(math.pi - ang, 0.0), math.pi))
    kappa = float(sum(turnings))
    return CurvatureReport(kappa=kappa, turning_angles=turnings,
                           vertex_angles=angles,
                           fenchel_ok=kappa >= TWO_PI - 1e-9)


def inscribe(space, sampler, n) -> PolygonalCurve:
    """Polygon on the parameters i/n of a closed-curve oracle."""
    if n < 3:
        raise InvalidCurve("need n >= 3")
    pts = []
    for i in range(n):
        try:
            p = sampler(i / n)
        except Exception as exc:  # noqa: BLE001 - propagated per contract
            raise SamplerFailure(f"sampler failed at t={i / n}") from exc
        if not isinstance(p, Point):
            raise SamplerFailure("sampler must return Point instances")
        pts.append(p)
    return PolygonalCurve(space, pts)


def arc_length_param(curve: PolygonalCurve, t: float) -> Point:
    return curve.point_at(t)


def curve_from_dict(space, data) -> PolygonalCurve:
    """Curve description: chart-addressed points, or raw coordinate rows for
    Euclidean targets."""
    if isinstance(data, dict):
        pts = data.get("points")
    else:
        pts = data
    if pts is None:
        raise SceneParseError("curve description lacks 'points'")
    vertices = []
    for item in pts:
        if isinstance(item, dict):
            vertices.append(Point(item["chart"], tuple(item["coords"])))
        else:
            if space.kind != "Euclidean":
                raise SceneParseError("raw coordinate rows only valid in Euclidean targets")
            vertices.append(Point("e0", tuple(item)))
    return PolygonalCurve(space, vertices)


def regular_polygon(space, n, radius=1.0, center=None):
    """Planar regular n-gon (Euclidean 2/3 targets)."""
    dim = space.dimension
    pts = []
    for k in range(n):
        a = TWO_PI * k / n
        c = [radius * math.cos(a), radius * math.sin(a)] + [0.0] * (dim - 2)
        if center is not None:
            c = [ci + oi for ci, oi in zip(c, center)]
        pts.append(Point("e0", tuple(c)))
    return PolygonalCurve(space, pts)


def cone_circle(space, n, radius=1.0):
    """Circle of given radius around the tip of a cone, inscribed as an n-gon
    spanning the full angle alpha."""
    pts = [Point(space.chart, (radius, space.alpha * k / n)) for k in range(n)]
    return PolygonalCurve(space, pts)


def glued_double_loop(space, tip=(0.0, 0.8), base_radius=2.0, wobble=0.6, n=40):
    """Doubly winding locally convex polygon around ``tip`` in a glued-planes
    space: radius a + b*cos(phi/2) over phi in [0, 4*pi).  The two passes
    separate radially over the shared sector and cross only below the seam,
    on different sheets, so the polygon is a Jordan curve; its radial fan
    around the tip forces total curvature exactly 4*pi.
    """
    a, b = float(base_radius), float(wobble)
    tx, ty = tip
    pts = []
    for k in range(n):
        phi = 4.0 * math.pi * k / n
        r = a + b * math.cos(phi / 2.0)
        x = tx + r * math.cos(math.pi / 2.0 + phi)
        y = ty + r * math.sin(math.pi / 2.0 + phi)
        if space.in_sector(x, y):
            pts.append(Point("shared", (x, y)))
        else:
            sheet = 1 if phi < TWO_PI else 2
            pts.append(Point(f"sheet{sheet}", (x, y)))
    return PolygonalCurve(space, pts)
