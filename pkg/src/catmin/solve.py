"""Discrete Plateau solver.

Interior vertices relax to weighted Frechet means of their neighbors (trace-
form edge weights, so every accepted update is an exact local minimization of
the trace energy and the per-sweep energy trace is nonincreasing by
construction).  Boundary vertices optionally slide along the curve, keeping
cyclic monotonicity with three pinned parameters fixing the Moebius gauge.
Deterministic: fixed sweep order, color-synchronous updates, keep-previous
tie-breaking; no randomness is consumed.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .curve import PolygonalCurve
from .errors import InvalidCurve, NoConvergence
from .mesh import (DiscMesh, MeshMap, generate_disc_mesh, map_area,
                   subdivide_mesh, trace_energy)
from .space import Euclidean


@dataclass
class SolverConfig:
    rings: int = 12
    max_sweeps: int = 800
    tol_energy: float = 1e-8
    boundary_mode: str = "sliding"
    pinned: tuple = (0.0, 1.0 / 3.0, 2.0 / 3.0)
    seed: int = 0
    refinement_levels: int = 0
    slide_every: int = 4
    inner_passes: int = 2

    def __post_init__(self):
        p = tuple(float(x) for x in self.pinned)
        if len(p) != 3 or not (p[0] < p[1] < p[2]):
            raise ValueError("pinned parameters must be three strictly increasing values")
        if self.tol_energy <= 0:
            raise ValueError("tol_energy must be positive")
        if self.boundary_mode not in ("fixed", "sliding"):
            raise ValueError("boundary_mode must be 'fixed' or 'sliding'")
        self.pinned = p

    def to_dict(self):
        return {"rings": self.rings, "max_sweeps": self.max_sweeps,
                "tol_energy": self.tol_energy, "boundary_mode": self.boundary_mode,
                "pinned": list(self.pinned), "seed": self.seed,
                "refinement_levels": self.refinement_levels,
                "slide_every": self.slide_every, "inner_passes": self.inner_passes}


@dataclass
class SolveResult:
    map: MeshMap
    energy_trace: list
    area: float
    converged: bool
    boundary_params: np.ndarray
    curve: PolygonalCurve
    config: SolverConfig
    diagnostics: dict = field(default_factory=dict)

    def summary(self):
        return {"area": self.area, "converged": self.converged,
                "sweeps": len(self.energy_trace),
                "energy_first": self.energy_trace[0] if self.energy_trace else None,
                "energy_last": self.energy_trace[-1] if self.energy_trace else None,
                "trace_energy": self.diagnostics.get("trace_energy"),
                "max_stretch_energy": self.diagnostics.get("max_stretch_energy"),
                "conformality_ratio": self.diagnostics.get("conformality_ratio")}


class _Relaxer:
    def __init__(self, space, curve, mesh, cfg):
        self.space = space
        self.curve = curve
        self.mesh = mesh
        self.cfg = cfg
        self.nid, self.wgt = mesh.vertex_star
        self.is_euclidean = isinstance(space, Euclidean)
        self.edge_w = mesh.cot_weights

    def energy(self, enc):
        e = self.mesh.edges
        ell = self.space.dist_enc(enc[e[:, 0]], enc[e[:, 1]])
        return float(np.sum(self.edge_w * ell * ell))

    def star_energy(self, enc, ids, x):
        """Sum_j w_j d(x_i, image(nbr_j))^2 for each vertex in ids."""
        nid = self.nid[ids]
        wgt = self.wgt[ids]
        deg = nid.shape[1]
        total = np.zeros(len(ids))
        for k in range(deg):
            mask = nid[:, k] >= 0
            if not np.any(mask):
                continue
            d = self.space.dist_enc(x[mask], enc[np.maximum(nid[mask, k], 0)])
            total[mask] += wgt[mask, k] * d * d
        return total

    def propose(self, enc, ids):
        """Candidate new positions: exact weighted means where a closed form
        applies, proximal-interpolation passes otherwise."""
        nid = self.nid[ids]
        wgt = self.wgt[ids]
        deg = nid.shape[1]
        wsum = wgt.sum(axis=1)
        if self.is_euclidean:
            acc = np.zeros((len(ids), enc.shape[1]))
            for k in range(deg):
                mask = nid[:, k] >= 0
                nb = enc[np.maximum(nid[:, k], 0)]
                acc += np.where(mask, wgt[:, k], 0.0)[:, None] * nb
            return [acc / wsum[:, None]]
        cands = []
        nbrs = enc[np.maximum(nid, 0)]
        closed = self.space.star_mean_candidates(enc[ids], nbrs, wgt)
        if closed is not None:
            cand, valid = closed
            cand = np.where(valid[:, None], cand, enc[ids])
            cands.append(cand)
        x = enc[ids].copy()
        for pas in range(1, self.cfg.inner_passes + 1):
            lam = 1.0 / (np.maximum(wsum, 1e-300) * pas)
            for k in range(deg):
                mask = nid[:, k] >= 0
                if not np.any(mask):
                    continue
                w = wgt[:, k]
                t = 2.0 * lam * w / (2.0 * lam * w + 1.0)
                t = np.where(mask, t, 0.0)
                x = self.space.geo_enc(x, enc[np.maximum(nid[:, k], 0)], t)
        cands.append(x)
        return cands

    def sweep_interior(self, enc):
        for ids in self.mesh.interior_colors:
            if not len(ids):
                continue
            e_best = self.star_energy(enc, ids, enc[ids])
            best = enc[ids].copy()
            changed = np.zeros(len(ids), bool)
            for prop in self.propose(enc, ids):
                e_new = self.star_energy(enc, ids, prop)
                better = e_new < e_best
                e_best = np.where(better, e_new, e_best)
                best[better] = prop[better]
                changed |= better
            enc[ids[changed]] = best[changed]
        return enc

    def sweep_boundary(self, enc, params, pinned_idx):
        loop = self.mesh.boundary_loop
        B = len(loop)
        pos = {int(v): i for i, v in enumerate(loop)}
        for cls in self.mesh.boundary_colors:
            work = [v for v in cls if pos[int(v)] not in pinned_idx]
            if not work:
                continue
            work = np.array(work)
            wi = np.array([pos[int(v)] for v in work])
            prev = params[(wi - 1) % B]
            nxt = params[(wi + 1) % B]
            gap = (nxt - prev) % 1.0
            gap = np.where(gap <= 0, 1e-12, gap)
            lo = prev + 1e-4 * gap
            width = gap * (1.0 - 2e-4)
            G = 13
            cur_best = params[wi].copy()
            e_best = self.star_energy(enc, work, enc[work])
            for refine in range(3):
                fr = (np.arange(G) + 0.5) / G
                cand = (lo[:, None] + width[:, None] * fr[None, :]) % 1.0
                flat = cand.reshape(-1)
                pts, _ = self.curve.points_at_enc(flat)
                pts = pts.reshape(len(work), G, -1)
                for g in range(G):
                    e = self.star_energy(enc, work, pts[:, g])
                    better = e < e_best
                    e_best = np.where(better, e, e_best)
                    cur_best = np.where(better, cand[:, g], cur_best)
                # shrink the search window around the incumbent
                width = width / G * 3.0
                lo = (cur_best - width / 2.0)
            new_pts, _ = self.curve.points_at_enc(cur_best)
            enc[work] = new_pts
            params[wi] = cur_best % 1.0
        return enc, params


def _initial_state(space, curve, mesh, cfg):
    loop = mesh.boundary_loop
    B = len(loop)
    params = np.arange(B) / B
    pinned_idx = set()
    for p in cfg.pinned:
        i = int(round(p * B)) % B
        params[i] = p
        pinned_idx.add(i)
    if len(pinned_idx) != 3:
        raise ValueError("pinned parameters collide on boundary vertices")
    enc = np.zeros((len(mesh.vertices), curve.enc.shape[1]))
    b_enc, _ = curve.points_at_enc(params)
    enc[loop] = b_enc
    # crude center: frechet mean of the boundary images at loose tolerance
    try:
        center = space.frechet_mean(space.decode(b_enc[::2]),
                                    tol=1e-4 * curve.total_length, max_passes=80)
    except NoConvergence as err:
        center = err.best
    c_enc = space.encode([center])[0]
    interior = mesh.interior_vertices
    if len(interior):
        rho = np.linalg.norm(mesh.vertices[interior], axis=1)
        theta = np.mod(np.arctan2(mesh.vertices[interior, 1],
                                  mesh.vertices[interior, 0]), 2.0 * math.pi)
        targets, _ = curve.points_at_enc(theta / (2.0 * math.pi))
        starts = np.repeat(c_enc[None, :], len(interior), axis=0)
        enc[interior] = space.geo_enc(starts, targets, rho)
    return enc, params, sorted(pinned_idx)


def _relax(space, curve, mesh, enc, params, cfg, pinned_idx):
    rel = _Relaxer(space, curve, mesh, cfg)
    trace = []
    e_prev = rel.energy(enc)
    sliding = cfg.boundary_mode == "sliding"
    window = cfg.slide_every if sliding else 1
    history = [e_prev]
    converged = False
    for sweep in range(1, cfg.max_sweeps + 1):
        enc = rel.sweep_interior(enc)
        if sliding and sweep % cfg.slide_every == 0:
            enc, params = rel.sweep_boundary(enc, params, pinned_idx)
        e = rel.energy(enc)
        trace.append(e)
        history.append(e)
        if len(history) > window:
            e_ref = history[-1 - window]
            if e_ref - e <= cfg.tol_energy * max(e, 1e-300):
                converged = True
                break
    return enc, params, trace, converged


def solve_plateau(space, curve: PolygonalCurve, cfg: SolverConfig) -> SolveResult:
    """Relax a disc mesh spanning ``curve`` to a discrete minimal map."""
    if curve.total_length <= 0:
        raise InvalidCurve("zero-length curve")
    mesh = generate_disc_mesh(cfg.rings)
    enc, params, pinned_idx = _initial_state(space, curve, mesh, cfg)
    enc, params, trace, converged = _relax(space, curve, mesh, enc, params, cfg,
                                           pinned_idx)
    result = _package(space, curve, mesh, enc, params, trace, converged, cfg)
    for _ in range(cfg.refinement_levels):
        result = refine_and_resolve(result, 1)
    return result


def _package(space, curve, mesh, enc, params, trace, converged, cfg):
    mapping = MeshMap(mesh, space, enc)
    from .mesh import conformality_ratio, max_stretch_energy
    diag = {"trace_energy": trace_energy(mapping),
            "max_stretch_energy": max_stretch_energy(mapping),
            "conformality_ratio": conformality_ratio(mapping)}
    return SolveResult(map=mapping, energy_trace=list(trace),
                       area=map_area(mapping), converged=converged,
                       boundary_params=np.asarray(params), curve=curve,
                       config=cfg, diagnostics=diag)


def refine_and_resolve(result: SolveResult, levels: int) -> SolveResult:
    """Subdivide, interpolate along target geodesics, re-relax."""
    if levels < 1:
        raise ValueError("levels >= 1")
    space = result.map.space
    curve = result.curve
    cfg = result.config
    mapping = result.map
    params = np.asarray(result.boundary_params)
    out = result
    for _ in range(levels):
        mesh = mapping.mesh
        mesh2, mid = subdivide_mesh(mesh)
        E = mesh.edges
        mids_enc = space.geo_enc(mapping.images_enc[E[:, 0]],
                                 mapping.images_enc[E[:, 1]],
                                 np.full(len(E), 0.5))
        enc2 = np.vstack([mapping.images_enc, mids_enc])
        # boundary midpoints: parameter midpoints, images exactly on the curve
        loop = mesh.boundary_loop
        B = len(loop)
        params2 = np.zeros(2 * B)
        for i in range(B):
            a, b = int(loop[i]), int(loop[(i + 1) % B])
            ei = mesh.edge_index[(min(a, b), max(a, b))]
            sa, sb = params[i], params[(i + 1) % B]
            gap = (sb - sa) % 1.0
            smid = (sa + gap / 2.0) % 1.0
            params2[2 * i] = params[i]
            params2[2 * i + 1] = smid
            pt, _ = curve.points_at_enc(np.array([smid]))
            enc2[len(mesh.vertices) + ei] = pt[0]
        pinned_idx = sorted(2 * i for i in range(B)
                            if any(abs(params[i] - p) < 1e-15 for p in cfg.pinned))
        enc2, params2, trace, converged = _relax(space, curve, mesh2, enc2,
                                                 params2, cfg, pinned_idx)
        out = _package(space, curve, mesh2, enc2, params2, trace, converged, cfg)
        mapping = out.map
        params = params2
    return out


def radial_cone_fill(space, p, curve: PolygonalCurve, rings: int) -> MeshMap:
    """Map domain radii to constant-speed geodesics from ``p`` to the curve."""
    mesh = generate_disc_mesh(rings)
    rho = np.linalg.norm(mesh.vertices, axis=1)
    theta = np.mod(np.arctan2(mesh.vertices[:, 1], mesh.vertices[:, 0]),
                   2.0 * math.pi)
    targets, _ = curve.points_at_enc(theta / (2.0 * math.pi))
    p_enc = space.encode([p])[0]
    starts = np.repeat(p_enc[None, :], len(rho), axis=0)
    enc = space.geo_enc(starts, targets, rho)
    enc[rho == 0.0] = p_enc
    return MeshMap(mesh, space, enc)
