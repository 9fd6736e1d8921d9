"""Chart-based target geometries and their metric oracles.

Four concrete kinds: Euclidean n-space, the Euclidean cone of angle alpha,
two planes glued along a flat sector of angle alpha <= pi, and general flat
polyhedral chart complexes (see :mod:`catmin.polyhedral`).

All spaces expose batch operations on encoded point arrays (one float row per
point); the encodings are documented in :mod:`catmin._kernels.fallback`.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DegenerateQuery, InvalidChart, NoConvergence, NotTwoDimensional
from .reports import ComparisonReport

TWO_PI = 2.0 * math.pi
_COORD_TOL = 1e-12


@dataclass(frozen=True)
class Point:
    """Chart-addressed location: chart id plus chart-local coordinates."""

    chart: str
    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(float(c) for c in self.coords))

    def to_dict(self):
        return {"chart": self.chart, "coords": list(self.coords)}


@dataclass(frozen=True)
class AngleQuery:
    base: Point
    x: Point
    y: Point
    probe_radii: tuple = ()


class TargetSpace:
    """Metric-space oracle. Immutable after construction; concurrent reads are safe."""

    kind = "abstract"

    # --- encoding -----------------------------------------------------
    def encode(self, points):
        return np.array([self.encode_one(p) for p in points], float)

    def encode_one(self, p: Point):
        raise NotImplementedError

    def decode_one(self, row) -> Point:
        raise NotImplementedError

    def decode(self, arr):
        return [self.decode_one(row) for row in np.asarray(arr, float)]

    # --- batch metric ops ----------------------------------------------
    def dist_enc(self, a, b):
        raise NotImplementedError

    def geo_enc(self, a, b, t):
        raise NotImplementedError

    # --- point-level convenience ----------------------------------------
    def distance(self, p: Point, q: Point) -> float:
        a = self.encode([p])
        b = self.encode([q])
        return float(self.dist_enc(a, b)[0])

    def geodesic_point(self, p: Point, q: Point, t: float) -> Point:
        if t == 0.0:
            return p
        if t == 1.0:
            return q
        a = self.encode([p])
        b = self.encode([q])
        return self.decode_one(self.geo_enc(a, b, np.array([t]))[0])

    # --- angles -----------------------------------------------------------
    def upper_angle_exact(self, q: Point, x: Point, y: Point):
        """Closed-form angle, or None when only probing works."""
        return None

    def upper_angle(self, query: AngleQuery) -> float:
        q, x, y = query.base, query.x, query.y
        dqx = self.distance(q, x)
        dqy = self.distance(q, y)
        if dqx <= 0.0 or dqy <= 0.0:
            raise DegenerateQuery("angle base coincides with a target")
        exact = self.upper_angle_exact(q, x, y)
        if exact is not None:
            return exact
        radii = query.probe_radii or default_probe_radii(min(dqx, dqy))
        if any(r <= 0 for r in radii) or list(radii) != sorted(radii, reverse=True):
            raise DegenerateQuery("probe radii must be positive and decreasing")
        if any(r >= min(dqx, dqy) for r in radii):
            raise DegenerateQuery("probe radius exceeds a geodesic length")
        angles = [self._comparison_angle(q, x, y, r, dqx, dqy) for r in radii]
        if len(angles) == 1:
            return angles[0]
        # two-level Richardson assuming first-order behavior in the radius
        a_big, a_small = angles[0], angles[-1]
        ratio = radii[0] / radii[-1]
        val = (ratio * a_small - a_big) / (ratio - 1.0)
        return min(max(val, 0.0), math.pi)

    def _comparison_angle(self, q, x, y, r, dqx, dqy):
        u = self.geodesic_point(q, x, r / dqx)
        v = self.geodesic_point(q, y, r / dqy)
        duv = self.distance(u, v)
        cosv = (2.0 * r * r - duv * duv) / (2.0 * r * r)
        return math.acos(min(1.0, max(-1.0, cosv)))

    # --- structure ----------------------------------------------------------
    def link_length(self, v: Point) -> float:
        raise NotImplementedError

    def interior_singular_points(self):
        """Chart vertices / singular loci relevant for link-condition checks."""
        return []

    def extra_mean_candidates(self, enc, weights):
        """Space-specific closed-form candidates for Frechet means on
        nonsmooth loci (seams). Encoded rows."""
        return []

    def star_mean_candidates(self, cur, nbrs, weights):
        """Batched closed-form weighted-mean proposals for relaxation stars.

        cur: (n, k) current points; nbrs: (n, deg, k); weights: (n, deg) with
        zero padding.  Returns (candidates (n, k), valid (n,)) or None when the
        space has no useful closed form.  Candidates are proposals only; the
        solver accepts them by direct energy comparison.
        """
        return None

    def sample_points(self, n, rng, radius=2.0):
        raise NotImplementedError

    def frechet_mean(self, points, weights=None, tol=None, max_passes=200) -> Point:
        return frechet_mean(self, points, weights, tol=tol, max_passes=max_passes)

    def verify_cat0(self, samples=200, seed=0, radius=2.0) -> ComparisonReport:
        return verify_cat0(self, samples=samples, seed=seed, radius=radius)

    def to_dict(self):
        raise NotImplementedError


def default_probe_radii(min_dist, factor=1e-3):
    d = factor * min_dist
    return (d, d / 2.0)


def _unit(v):
    n = np.linalg.norm(v)
    if n == 0.0:
        return v
    return v / n


def _vec_angle(u, v):
    c = float(np.dot(_unit(np.asarray(u, float)), _unit(np.asarray(v, float))))
    return math.acos(min(1.0, max(-1.0, c)))


class Euclidean(TargetSpace):
    kind = "Euclidean"

    def __init__(self, dimension):
        self.dimension = int(dimension)
        if self.dimension < 1:
            raise ValueError("dimension must be positive")
        self.chart = "e0"

    def encode_one(self, p):
        if p.chart != self.chart:
            raise InvalidChart(f"unknown chart {p.chart!r}")
        if len(p.coords) != self.dimension:
            raise InvalidChart("coordinate dimension mismatch")
        return np.array(p.coords, float)

    def decode_one(self, row):
        return Point(self.chart, tuple(row))

    def point(self, *coords):
        return Point(self.chart, tuple(coords))

    def dist_enc(self, a, b):
        return np.linalg.norm(np.asarray(a, float) - np.asarray(b, float), axis=1)

    def geo_enc(self, a, b, t):
        t = np.asarray(t, float)[:, None]
        return np.asarray(a, float) * (1.0 - t) + np.asarray(b, float) * t

    def upper_angle_exact(self, q, x, y):
        u = np.array(x.coords) - np.array(q.coords)
        v = np.array(y.coords) - np.array(q.coords)
        return _vec_angle(u, v)

    def link_length(self, v):
        if self.dimension != 2:
            raise NotTwoDimensional("link length defined for 2-dimensional spaces")
        return TWO_PI

    def sample_points(self, n, rng, radius=2.0):
        arr = rng.normal(size=(n, self.dimension)) * radius
        return [self.decode_one(r) for r in arr]

    def to_dict(self):
        return {"kind": self.kind, "dimension": self.dimension}


class EuclideanCone(TargetSpace):
    """Cone over a circle of length alpha; CAT(0) iff alpha >= 2*pi."""

    kind = "EuclideanCone"

    def __init__(self, cone_angle):
        self.alpha = float(cone_angle)
        if self.alpha <= 0:
            raise ValueError("cone angle must be positive")
        self.chart = "c0"

    def point(self, r, theta):
        return Point(self.chart, (r, theta % self.alpha if r > 0 else 0.0))

    @property
    def tip(self):
        return Point(self.chart, (0.0, 0.0))

    def encode_one(self, p):
        if p.chart != self.chart:
            raise InvalidChart(f"unknown chart {p.chart!r}")
        r, th = p.coords
        if r < 0:
            raise InvalidChart("negative radius")
        return np.array([r, th % self.alpha if r > 0 else 0.0])

    def decode_one(self, row):
        r, th = row
        return Point(self.chart, (float(r), float(th % self.alpha) if r > 0 else 0.0))

    def dist_enc(self, a, b):
        return _kernels.cone_dist(np.asarray(a, float), np.asarray(b, float), self.alpha)

    def geo_enc(self, a, b, t):
        return _kernels.cone_geo(np.asarray(a, float), np.asarray(b, float),
                                 np.asarray(t, float), self.alpha)

    def _angular_sep(self, t1, t2):
        d = abs(t1 - t2) % self.alpha
        return min(d, self.alpha - d)

    def _germ(self, q, x):
        """Initial direction of the geodesic q -> x in a local development of q."""
        rq, tq = q.coords
        rx, tx = x.coords
        sep = self._angular_sep(tq, tx)
        if rx == 0.0 or sep >= math.pi:
            return np.array([-1.0, 0.0])  # toward the tip
        d = (tx - tq) % self.alpha
        sgn = 1.0 if d <= self.alpha / 2.0 else -1.0
        target = np.array([rx * math.cos(sep), sgn * rx * math.sin(sep)])
        return _unit(target - np.array([rq, 0.0]))

    def upper_angle_exact(self, q, x, y):
        rq, tq = q.coords
        if rq == 0.0:
            sep = self._angular_sep(x.coords[1], y.coords[1])
            return min(sep, math.pi)
        return _vec_angle(self._germ(q, x), self._germ(q, y))

    def link_length(self, v):
        r = v.coords[0]
        return self.alpha if r == 0.0 else TWO_PI

    def interior_singular_points(self):
        return [self.tip]

    def star_mean_candidates(self, cur, nbrs, weights):
        """Develop the neighbor star into the wedge around the current angular
        position and average there; valid while the wedge stays below pi/2 on
        each side (development then realizes all relevant distances)."""
        w = np.asarray(weights, float)
        pad = w <= 0.0
        theta_c = cur[:, 1][:, None]
        delta = (nbrs[:, :, 1] - theta_c) % self.alpha
        delta = np.where(delta > self.alpha / 2.0, delta - self.alpha, delta)
        delta = np.where(pad, 0.0, delta)
        valid = (np.abs(delta) < 0.5 * math.pi).all(axis=1)
        valid &= ~((nbrs[:, :, 0] <= 0.0) & ~pad).any(axis=1)
        px = nbrs[:, :, 0] * np.cos(delta)
        py = nbrs[:, :, 0] * np.sin(delta)
        wsum = np.maximum(w.sum(axis=1), 1e-300)
        mx = (w * px).sum(axis=1) / wsum
        my = (w * py).sum(axis=1) / wsum
        r = np.hypot(mx, my)
        th = (cur[:, 1] + np.arctan2(my, mx)) % self.alpha
        out = np.column_stack([r, np.where(r > 0, th, 0.0)])
        return out, valid

    def to_dict(self):
        return {"kind": self.kind, "cone_angle": self.alpha}


class GluedPlanes(TargetSpace):
    """Two flat planes glued along the sector {0 <= polar angle <= alpha}, alpha <= pi.

    Charts: ``shared`` (points of the sector), ``sheet1`` and ``sheet2``
    (plane copies outside the sector).  Coordinates live in the common plane
    identification of both copies.
    """

    kind = "GluedPlanes"
    charts = ("shared", "sheet1", "sheet2")

    def __init__(self, sector_angle):
        self.alpha = float(sector_angle)
        if not (0.0 < self.alpha <= math.pi + 1e-12):
            raise ValueError("sector angle must lie in (0, pi]")

    def in_sector(self, x, y):
        r = math.hypot(x, y)
        tol = _COORD_TOL * (1.0 + r)
        c0 = y
        c1 = math.cos(self.alpha) * y - math.sin(self.alpha) * x
        return c0 >= -tol and c1 <= tol

    def point(self, x, y, sheet=0):
        if self.in_sector(x, y):
            return Point("shared", (x, y))
        if sheet not in (1, 2):
            raise InvalidChart("point outside the sector needs sheet 1 or 2")
        return Point(f"sheet{sheet}", (x, y))

    def encode_one(self, p):
        x, y = p.coords
        if p.chart == "shared":
            if not self.in_sector(x, y):
                raise InvalidChart("shared point lies outside the gluing sector")
            return np.array([x, y, 0.0])
        if p.chart in ("sheet1", "sheet2"):
            s = 1.0 if p.chart == "sheet1" else 2.0
            if self.in_sector(x, y):
                s = 0.0  # gluing map: sector points are identified
            return np.array([x, y, s])
        raise InvalidChart(f"unknown chart {p.chart!r}")

    def decode_one(self, row):
        x, y, s = row
        s = int(round(s))
        chart = "shared" if s == 0 else f"sheet{s}"
        return Point(chart, (float(x), float(y)))

    def dist_enc(self, a, b):
        return _kernels.glued_dist(np.asarray(a, float), np.asarray(b, float), self.alpha)

    def geo_enc(self, a, b, t):
        return _kernels.glued_geo(np.asarray(a, float), np.asarray(b, float),
                                  np.asarray(t, float), self.alpha)

    # seam structure helpers ------------------------------------------------
    def _on_seam(self, x, y):
        """Ray index (0 or 1) if (x, y) is on a sector boundary ray, else None."""
        r = math.hypot(x, y)
        if r == 0.0:
            return "apex"
        tol = 1e-9 * (1.0 + r)
        if abs(y) <= tol and x >= 0.0:
            return 0
        c1 = math.cos(self.alpha) * y - math.sin(self.alpha) * x
        along = math.cos(self.alpha) * x + math.sin(self.alpha) * y
        if abs(c1) <= tol and along >= 0.0:
            return 1
        return None

    def _via_point(self, p, q):
        """Best sector-boundary via-point for a cross-sheet pair whose straight
        chord misses the sector; None if the apex is optimal."""
        best = (np.hypot(*p) + np.hypot(*q), None)
        for u in (np.array([1.0, 0.0]),
                  np.array([math.cos(self.alpha), math.sin(self.alpha)])):
            qr = 2.0 * float(np.dot(q, u)) * u - q
            fp = u[0] * p[1] - u[1] * p[0]
            fq = u[0] * qr[1] - u[1] * qr[0]
            den = fq - fp
            if den == 0.0:
                continue
            tau = -fp / den
            z = p + tau * (qr - p)
            if 0.0 <= tau <= 1.0 and float(np.dot(z, u)) >= 0.0:
                d = float(np.hypot(*(p - qr)))
                if d < best[0]:
                    best = (d, z)
        return best[1]

    def _chord_crosses_sector(self, p, q):
        lo, hi = 0.0, 1.0
        for ux, uy, sgn in ((1.0, 0.0, 1.0),
                            (math.cos(self.alpha), math.sin(self.alpha), -1.0)):
            fp = sgn * (ux * p[1] - uy * p[0])
            fq = sgn * (ux * q[1] - uy * q[0])
            if fp < 0 and fq < 0:
                return False
            if fp < 0 and fq >= 0:
                lo = max(lo, -fp / (fq - fp))
            elif fp >= 0 and fq < 0:
                hi = min(hi, -fp / (fq - fp))
        return lo <= hi

    def _germ(self, q, x):
        """First-leg direction of the geodesic q -> x, plus the sheet the germ
        travels through (0 shared side, else 1 / 2). Exact case analysis."""
        a = self.encode([q])[0]
        b = self.encode([x])[0]
        sa, sb = int(a[2]), int(b[2])
        p, qq = a[:2], b[:2]
        target = qq
        if not (sa == sb or sa == 0 or sb == 0) and not self._chord_crosses_sector(p, qq):
            z = self._via_point(p, qq)
            target = z if z is not None else np.zeros(2)
        v = target - p
        step = p + 1e-6 * (1.0 + float(np.hypot(*p))) * _unit(v)
        if self.in_sector(step[0], step[1]):
            sheet = 0
        else:
            sheet = sa if sa != 0 else sb
        return _unit(v), sheet

    def upper_angle_exact(self, q, x, y):
        qx, qy = q.coords
        seam = self._on_seam(qx, qy)
        g1, s1 = self._germ(q, x)
        g2, s2 = self._germ(q, y)
        if seam is None:
            return _vec_angle(g1, g2)
        if seam == "apex":
            return self._apex_angle(g1, s1, g2, s2)
        # point on a seam ray: three half-planes along a line
        if s1 == s2 or s1 == 0 or s2 == 0:
            return _vec_angle(g1, g2)
        ray = np.array([1.0, 0.0]) if seam == 0 else np.array(
            [math.cos(self.alpha), math.sin(self.alpha)])
        psi1 = _vec_angle(g1, ray)
        psi2 = _vec_angle(g2, ray)
        return min(psi1 + psi2, (math.pi - psi1) + (math.pi - psi2), math.pi)

    def _apex_angle(self, g1, s1, g2, s2):
        # link at the apex: shared arc of length alpha and two sheet arcs of
        # length 2*pi - alpha between the junction directions of the two rays
        def link_pos(g, s):
            th = math.atan2(g[1], g[0]) % TWO_PI
            if s == 0:
                return ("shared", th)  # th in [0, alpha]
            return (s, (th - self.alpha) % TWO_PI)  # arc coordinate in [0, 2pi-alpha]

        arc_len = {"shared": self.alpha, 1: TWO_PI - self.alpha, 2: TWO_PI - self.alpha}
        # junction j0 = direction of ray0, j1 = direction of ray alpha
        # along each arc: position 0 at j1...; define shared arc from j0 (0) to j1
        # (alpha); sheet arcs from j1 (0) around to j0 (2pi-alpha).
        def to_junctions(tag, pos):
            if tag == "shared":
                return pos, arc_len[tag] - pos  # (to j0, to j1)
            return arc_len[tag] - pos, pos

        r1, p1 = link_pos(g1, s1)
        r2, p2 = link_pos(g2, s2)
        if r1 == r2:
            direct = abs(p1 - p2)
        else:
            direct = math.inf
        a10, a11 = to_junctions(r1, p1)
        a20, a21 = to_junctions(r2, p2)
        j01 = min(self.alpha, TWO_PI - self.alpha)
        best = min(direct, a10 + a20, a11 + a21, a10 + j01 + a21, a11 + j01 + a20)
        return min(best, math.pi)

    def link_length(self, v):
        x, y = v.coords
        seam = self._on_seam(x, y)
        if seam is None:
            return TWO_PI
        if seam == "apex":
            return 2.0 * TWO_PI - self.alpha
        return 3.0 * math.pi

    def extra_mean_candidates(self, enc, weights):
        # distances from seam points are planar to every sheet, so the mean
        # objective restricted to a seam ray is an exact quadratic
        w = np.asarray(weights, float)
        out = []
        for u in (np.array([1.0, 0.0]),
                  np.array([math.cos(self.alpha), math.sin(self.alpha)])):
            s = float(np.sum(w * (enc[:, :2] @ u)) / np.sum(w))
            s = max(0.0, s)
            out.append(np.array([s * u[0], s * u[1], 0.0]))
        return out

    def star_mean_candidates(self, cur, nbrs, weights):
        """Planar weighted mean whenever the neighbor star lives in a single
        plane copy (all shared, or shared plus one sheet)."""
        n, deg, _ = nbrs.shape
        w = np.asarray(weights, float)
        pad = w <= 0.0
        sheets = nbrs[:, :, 2].copy()
        sheets[pad] = 0.0
        has1 = (sheets == 1.0).any(axis=1)
        has2 = (sheets == 2.0).any(axis=1)
        valid = ~(has1 & has2)
        wsum = np.maximum(w.sum(axis=1), 1e-300)
        mx = (w * nbrs[:, :, 0]).sum(axis=1) / wsum
        my = (w * nbrs[:, :, 1]).sum(axis=1) / wsum
        sheet = np.where(has1, 1.0, np.where(has2, 2.0, 0.0))
        r = np.hypot(mx, my)
        tol = _COORD_TOL * (1.0 + r)
        c0 = my
        c1 = math.cos(self.alpha) * my - math.sin(self.alpha) * mx
        in_sec = (c0 >= -tol) & (c1 <= tol)
        sheet = np.where(in_sec, 0.0, sheet)
        # a mean outside the sector needs a concrete sheet
        valid &= in_sec | (sheet > 0)
        return np.column_stack([mx, my, sheet]), valid

    def interior_singular_points(self):
        return [Point("shared", (0.0, 0.0))]

    def sample_points(self, n, rng, radius=2.0):
        xy = rng.normal(size=(n, 2)) * radius
        sheets = rng.integers(1, 3, size=n)
        return [self.point(float(x), float(y), int(s)) for (x, y), s in zip(xy, sheets)]

    def to_dict(self):
        return {"kind": self.kind, "cone_angle": self.alpha}


def frechet_mean(space, points, weights=None, tol=None, max_passes=200):
    """Weighted Frechet mean by cyclic proximal steps along geodesics.

    Exact in Euclidean targets.  Deterministic: fixed sweep order, diminishing
    proximal parameter.
    """
    points = list(points)
    if not points:
        raise ValueError("need at least one point")
    if weights is None:
        weights = [1.0] * len(points)
    weights = [float(w) for w in weights]
    if any(w < 0 for w in weights):
        raise ValueError("weights must be nonnegative")
    wsum = sum(weights)
    if wsum <= 0:
        raise ValueError("need at least one positive weight")
    keep = [i for i, w in enumerate(weights) if w > 0]
    points = [points[i] for i in keep]
    weights = [weights[i] for i in keep]
    if len(points) == 1:
        return points[0]

    if isinstance(space, Euclidean):
        arr = space.encode(points)
        w = np.asarray(weights)[:, None]
        return space.decode_one((arr * w).sum(axis=0) / wsum)

    enc = space.encode(points)
    idx0 = int(np.argmax(weights))
    x = enc[idx0:idx0 + 1].copy()
    scale = float(np.max(space.dist_enc(np.repeat(x, len(points), axis=0), enc)))
    if scale == 0.0:
        return points[0]
    if tol is None:
        tol = 1e-9 * scale
    warr = np.asarray(weights)

    def objective(row):
        d = space.dist_enc(np.repeat(row.reshape(1, -1), len(points), axis=0), enc)
        return float(np.sum(warr * d * d))

    order = list(range(len(points)))
    residual = math.inf
    converged = False
    for k in range(1, max_passes + 1):
        lam = 1.0 / (wsum * k)
        x_prev = x.copy()
        for i in order:
            w = weights[i]
            t = 2.0 * lam * w / (2.0 * lam * w + 1.0)
            x = space.geo_enc(x, enc[i:i + 1], np.array([t]))
        move = float(space.dist_enc(x, x_prev)[0])
        residual = move / (2.0 * lam * wsum)
        if residual <= tol:
            converged = True
            break

    # the proximal orbit cannot settle on nonsmooth minima (cone tips, seams);
    # test those candidates, and the inputs, by direct objective comparison
    cands = [x[0]] + [space.encode([s])[0] for s in space.interior_singular_points()]
    cands += list(space.extra_mean_candidates(enc, warr))
    cands += [enc[i] for i in range(len(points))]
    vals = [objective(c) for c in cands]
    best = int(np.argmin(vals))
    if converged or (best > 0 and vals[best] <= vals[0]):
        return space.decode_one(cands[best])
    raise NoConvergence("frechet mean did not converge",
                        best=space.decode_one(cands[best]), residual=residual)


def frechet_objective(space, x, points, weights=None):
    pts = list(points)
    if weights is None:
        weights = [1.0] * len(pts)
    a = space.encode([x] * len(pts))
    b = space.encode(pts)
    d = space.dist_enc(a, b)
    return float(np.sum(np.asarray(weights) * d * d))


def verify_cat0(space, samples=200, seed=0, radius=2.0):
    """Sample the CN midpoint inequality and scan singular links.

    CN: d(x,m)^2 <= d(x,y)^2/2 + d(x,z)^2/2 - d(y,z)^2/4 for m the midpoint
    of yz.  Positive defects witness curvature above zero.
    """
    rng = np.random.default_rng(seed)
    pts = space.sample_points(3 * samples, rng, radius=radius)
    enc = space.encode(pts)
    x, y, z = enc[0::3], enc[1::3], enc[2::3]
    m = space.geo_enc(y, z, np.full(len(x), 0.5))
    dxm = space.dist_enc(x, m)
    dxy = space.dist_enc(x, y)
    dxz = space.dist_enc(x, z)
    dyz = space.dist_enc(y, z)
    defect = dxm ** 2 - 0.5 * dxy ** 2 - 0.5 * dxz ** 2 + 0.25 * dyz ** 2
    cn_max = float(max(0.0, defect.max())) if len(defect) else 0.0
    violations = []
    for v in space.interior_singular_points():
        link = space.link_length(v)
        if link < TWO_PI - 1e-12:
            violations.append({"point": v.to_dict(), "link_length": link})
    return ComparisonReport(cn_defect_max=cn_max, link_violations=violations,
                            samples=samples)


def space_from_dict(data):
    kind = data.get("kind")
    if kind == "Euclidean":
        return Euclidean(data["dimension"])
    if kind == "EuclideanCone":
        return EuclideanCone(data["cone_angle"])
    if kind == "GluedPlanes":
        return GluedPlanes(data["cone_angle"])
    if kind == "PolyhedralComplex":
        from .polyhedral import PolyhedralComplex
        return PolyhedralComplex.from_dict(data)
    raise InvalidChart(f"unknown space kind {kind!r}")
