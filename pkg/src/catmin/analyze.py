"""Structure checks over solved mesh maps.

Density profiles use intrinsic preimage area: pull-back triangle areas times
the fraction of stratified barycentric samples whose image lands in the ball.
Comparison checks (CN midpoints, ball-volume growth, angle defects) run on the
pull-back edge-length graph.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import RadiusTooLarge
from .mesh import MeshMap, PullbackMetric, map_area, tri_pullback_areas
from .reports import ComparisonReport

TWO_PI = 2.0 * math.pi


def triangle_sample_grid(n_target):
    """Deterministic stratified barycentric grid with ~n_target points."""
    k = max(1, int(math.ceil(math.sqrt(2.0 * n_target))))
    pts = []
    for i in range(k):
        for j in range(k - i):
            a = (i + 1.0 / 3.0) / k
            b = (j + 1.0 / 3.0) / k
            pts.append((1.0 - a - b, a, b))
    return np.array(pts)


@dataclass
class DensityProfile:
    center: object
    radii: np.ndarray
    theta: np.ndarray
    stderr: np.ndarray
    monotonicity_defect: float
    theta_zero: float
    samples_per_triangle: int

    def to_dict(self):
        return {"center": self.center.to_dict(), "radii": list(self.radii),
                "theta": list(self.theta), "stderr": list(self.stderr),
                "monotonicity_defect": self.monotonicity_defect,
                "theta_zero": self.theta_zero,
                "samples_per_triangle": self.samples_per_triangle}


def boundary_distance(mapping: MeshMap, p):
    p_enc = mapping.space.encode([p])[0]
    b = mapping.images_enc[mapping.mesh.boundary_loop]
    return float(mapping.space.dist_enc(np.repeat(p_enc[None, :], len(b), axis=0),
                                        b).min())


def sample_image_distances(mapping: MeshMap, p, grid):
    """(F, S) distances d(f(z), p) over the stratified grid, plus pull-back
    triangle areas."""
    space = mapping.space
    F = len(mapping.mesh.triangles)
    p_enc = space.encode([p])[0]
    dists = np.empty((F, len(grid)))
    tris = np.arange(F)
    for s, bary in enumerate(grid):
        barys = np.tile(bary, (F, 1))
        img = mapping.image_points_enc(tris, barys)
        dists[:, s] = space.dist_enc(img, np.repeat(p_enc[None, :], F, axis=0))
    return dists


def density_profile(mapping: MeshMap, p, radii, samples_per_triangle=20,
                    boundary_guard=1e-9) -> DensityProfile:
    """theta(r) = (pull-back area of f^{-1}(B_r(p))) / (pi r^2) on a radius grid."""
    radii = np.asarray(radii, float)
    if np.any(np.diff(radii) <= 0) or np.any(radii <= 0):
        raise ValueError("radii must be positive and strictly increasing")
    d_b = boundary_distance(mapping, p)
    if radii[-1] >= d_b - boundary_guard:
        raise RadiusTooLarge(
            f"max radius {radii[-1]} reaches the boundary image (distance {d_b})")
    grid = triangle_sample_grid(samples_per_triangle)
    n = len(grid)
    areas = tri_pullback_areas(mapping)
    dists = sample_image_distances(mapping, p, grid)
    theta = np.empty(len(radii))
    stderr = np.empty(len(radii))
    for i, r in enumerate(radii):
        frac = (dists < r).sum(axis=1) / n
        theta[i] = float((areas * frac).sum() / (math.pi * r * r))
        var = float((areas ** 2 * frac * (1.0 - frac) / n).sum())
        stderr[i] = math.sqrt(var) / (math.pi * r * r)
    drops = np.maximum(0.0, theta[:-1] - theta[1:])
    defect = float(drops.max()) if len(drops) else 0.0
    smallest = theta[:3] if len(theta) >= 3 else theta
    return DensityProfile(center=p, radii=radii, theta=theta, stderr=stderr,
                          monotonicity_defect=defect,
                          theta_zero=float(np.median(smallest)),
                          samples_per_triangle=samples_per_triangle)


def check_monotonicity(profile: DensityProfile, slack: float):
    """Pass iff the profile never drops by more than ``slack``; the slack must
    dominate the estimator error, which is reported alongside."""
    est_err = float(profile.stderr.max()) if len(profile.stderr) else 0.0
    return {"passed": bool(profile.monotonicity_defect <= slack),
            "monotonicity_defect": profile.monotonicity_defect,
            "slack": slack, "estimator_error": est_err,
            "slack_dominates_error": bool(slack >= 2.0 * est_err)}


def count_preimages(mapping: MeshMap, p, image_tol, cluster_tol,
                    pullback: PullbackMetric = None,
                    samples_per_triangle=20) -> int:
    """Sampled preimages of p clustered at pull-back distance cluster_tol."""
    space = mapping.space
    mesh = mapping.mesh
    p_enc = space.encode([p])[0]
    hit_vertices = set()
    dv = space.dist_enc(mapping.images_enc,
                        np.repeat(p_enc[None, :], len(mapping.images_enc), axis=0))
    for v in np.nonzero(dv <= image_tol)[0]:
        hit_vertices.add(int(v))
    grid = triangle_sample_grid(samples_per_triangle)
    dists = sample_image_distances(mapping, p, grid)
    hit_t, hit_s = np.nonzero(dists <= image_tol)
    for t, s in zip(hit_t, hit_s):
        corner = int(np.argmax(grid[s]))
        hit_vertices.add(int(mesh.triangles[t, corner]))
    if not hit_vertices:
        return 0
    if pullback is None:
        pullback = PullbackMetric(mapping)
    reps = sorted(hit_vertices)
    D = pullback.dists_from(reps)
    D = D[:, reps]
    n = len(reps)
    # single-linkage components at cluster_tol
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if D[i, j] <= cluster_tol:
                pi, pj = find(i), find(j)
                if pi != pj:
                    parent[pi] = pj
    return len({find(i) for i in range(n)})


@dataclass
class InjectivityReport:
    delta: float
    epsilon: float
    min_ratio: float
    witnesses: list = field(default_factory=list)
    embedded: bool = False
    nodes: int = 0

    def to_dict(self):
        return {"delta": self.delta, "epsilon": self.epsilon,
                "min_ratio": self.min_ratio, "witnesses": self.witnesses,
                "embedded": self.embedded, "nodes": self.nodes}


def injectivity_report(mapping: MeshMap, delta, epsilon, subdivision=1,
                       max_nodes=4200) -> InjectivityReport:
    """Deterministic pair scan: min over node pairs at pull-back distance
    >= delta of image distance / pull-back distance."""
    pm = PullbackMetric(mapping, subdivision=subdivision)
    if pm.n_nodes > max_nodes:
        pm = PullbackMetric(mapping, subdivision=0)
    m = pm.mapping
    n = pm.n_nodes
    D = pm.dists_from(np.arange(n))
    img = m.images_enc
    min_ratio = math.inf
    witnesses = []
    chunk = max(1, int(2e6 / max(n, 1)))
    for start in range(0, n, chunk):
        rows = np.arange(start, min(start + chunk, n))
        A = np.repeat(img[rows], n, axis=0)
        B = np.tile(img, (len(rows), 1))
        d_img = m.space.dist_enc(A, B).reshape(len(rows), n)
        d_pb = D[rows]
        mask = d_pb >= delta
        if not mask.any():
            continue
        ratio = np.where(mask, d_img / np.maximum(d_pb, 1e-300), math.inf)
        idx = np.unravel_index(np.argmin(ratio), ratio.shape)
        val = float(ratio[idx])
        if val < min_ratio:
            min_ratio = val
            i, j = int(rows[idx[0]]), int(idx[1])
            witnesses = [{"node_a": i, "node_b": j,
                          "domain_a": list(m.mesh.vertices[i]),
                          "domain_b": list(m.mesh.vertices[j]),
                          "pullback_distance": float(d_pb[idx]),
                          "image_distance": float(d_img[idx]),
                          "ratio": val}]
    if not math.isfinite(min_ratio):
        min_ratio = 1.0
    return InjectivityReport(delta=float(delta), epsilon=float(epsilon),
                             min_ratio=float(min_ratio), witnesses=witnesses,
                             embedded=bool(min_ratio >= epsilon / delta),
                             nodes=n)


def _linear_sublevel_fraction(vals, r):
    """Area fraction of a triangle where the linear interpolant of the three
    vertex values is below r."""
    a, b, c = sorted(map(float, vals))
    if not math.isfinite(c):
        if not math.isfinite(a):
            return 0.0
        c = max(c, 1e300)
    if r <= a:
        return 0.0
    if r >= c:
        return 1.0
    if r <= b:
        den = (b - a) * (c - a)
        return (r - a) ** 2 / den if den > 0 else 0.5
    den = (c - a) * (c - b)
    return 1.0 - (c - r) ** 2 / den if den > 0 else 0.5


def pullback_ball_area(pullback: PullbackMetric, source, r, dists=None):
    d = pullback.surface_dists_from(source) if dists is None else dists
    areas = tri_pullback_areas(pullback.mapping)
    tris = pullback.mapping.mesh.triangles
    frac = np.array([_linear_sublevel_fraction(d[t], r) for t in tris])
    return float((areas * frac).sum())


def check_bishop_gromov(pullback: PullbackMetric, vertex, r):
    """(r^2/2) * (angle sum at the vertex) - (pull-back area of the r-ball):
    nonpositive up to mesh slack for intrinsically CAT(0) maps."""
    d = pullback.surface_dists_from(vertex)
    d_boundary = float(d[pullback.boundary_nodes()].min())
    if r >= d_boundary:
        raise RadiusTooLarge(f"r={r} reaches the boundary (graph distance {d_boundary})")
    angle = float(pullback.vertex_angle_sums()[vertex])
    ball = pullback_ball_area(pullback, vertex, r, dists=d)
    return 0.5 * r * r * angle - ball


def check_cn(pullback: PullbackMetric, samples=60, seed=0) -> ComparisonReport:
    """Sampled CN midpoint inequality on the pull-back metric.

    Approximate midpoints minimize the on-geodesic score
    (d_y + d_z - d_yz) + |d_y - d_z| over mesh nodes; the midpoint offset is
    bounded by the mesh size, which sets the slack scale.  Corruptions applied
    with ``PullbackMetric.scale_edges`` flow through automatically."""
    rng = np.random.default_rng(seed)
    n = pullback.n_nodes
    interior = np.setdiff1d(np.arange(n), pullback.boundary_nodes())
    pool = interior if len(interior) >= 3 else np.arange(n)
    triples = [rng.choice(pool, size=3, replace=False) for _ in range(samples)]
    tris = pullback.mapping.mesh.triangles
    bary = np.vstack([triangle_sample_grid(220), np.eye(3)])
    defects = []
    worst = 0.0
    for x, y, z in triples:
        d_y = pullback.surface_dists_from(int(y))
        d_z = pullback.surface_dists_from(int(z))
        dyz = d_y[int(z)]
        d_x = pullback.surface_dists_from(int(x))
        # continuous midpoint: minimize the on-geodesic + balance score over
        # barycentric interpolants in the triangles near the geodesic band
        score_v = (d_y + d_z - dyz) + np.abs(d_y - d_z)
        tri_score = score_v[tris].min(axis=1)
        h = pullback.max_edge_weight()
        cand = np.nonzero(tri_score <= tri_score.min() + 2.0 * h)[0]
        dy_i = d_y[tris[cand]] @ bary.T
        dz_i = d_z[tris[cand]] @ bary.T
        dx_i = d_x[tris[cand]] @ bary.T
        sc = (dy_i + dz_i - dyz) + np.abs(dy_i - dz_i)
        idx = np.unravel_index(np.argmin(sc), sc.shape)
        dxm = float(dx_i[idx])
        defect = (dxm ** 2 - 0.5 * d_x[int(y)] ** 2 - 0.5 * d_x[int(z)] ** 2
                  + 0.25 * dyz ** 2)
        defects.append(float(defect))
        worst = max(worst, float(defect))
    return ComparisonReport(cn_defect_max=max(0.0, worst), samples=samples,
                            notes={"defects_head": defects[:10],
                                   "max_edge_weight": pullback.max_edge_weight()})


def flatness_report(pullback: PullbackMetric, tol=1e-6, cone_defect=-TWO_PI,
                    cone_tol=0.1, max_cone_points=1) -> ComparisonReport:
    """Angle defects 2*pi - (pull-back angle sum) per interior vertex; the
    rigid-cone verdict needs all defects within tol except at most
    ``max_cone_points`` vertices whose defects sit near ``cone_defect``."""
    sums = pullback.vertex_angle_sums()
    interior = np.setdiff1d(np.arange(pullback.n_nodes),
                            pullback.boundary_nodes())
    defects = TWO_PI - sums[interior]
    pairs = [(int(v), float(d)) for v, d in zip(interior, defects)]
    flat = [p for p in pairs if abs(p[1]) <= tol]
    cones = [p for p in pairs if abs(p[1] - cone_defect) <= cone_tol]
    others = [p for p in pairs if abs(p[1]) > tol
              and abs(p[1] - cone_defect) > cone_tol]
    rigid = len(cones) <= max_cone_points and not others and len(cones) >= 1
    all_flat = not cones and not others
    report = ComparisonReport(angle_defects=pairs, samples=len(pairs))
    report.notes = {"rigid_cone": rigid, "all_flat": all_flat,
                    "cone_vertices": cones, "violations": others,
                    "flat_count": len(flat), "tol": tol,
                    "max_abs_defect": float(np.abs(defects).max()) if len(defects) else 0.0}
    return report


def isoperimetric_ratio(mapping: MeshMap, curve) -> float:
    """map area / (length^2 / 4 pi); at most 1 + slack for solved scenes."""
    bound = curve.total_length ** 2 / (4.0 * math.pi)
    return map_area(mapping) / bound
