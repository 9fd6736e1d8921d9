"""Triangulated disc domains, mesh maps, pull-back forms, energies and areas.

The pull-back form of a triangle is the symmetric 2x2 form Q reproducing the
squared image edge lengths on the domain edge vectors.  Energies: trace form
(discrete Dirichlet; the solver's objective) and the max-stretch form
(largest eigenvalue); the map area uses sqrt(det Q) clamped at zero so that
degenerate triangles carry no area.
"""

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.sparse as sp

from .errors import SingularSystem
from .serialize import dump_csv

TWO_PI = 2.0 * math.pi


class DiscMesh:
    """Combinatorial disc with planar vertices in the closed unit disc."""

    def __init__(self, vertices, triangles, boundary_loop, check=True):
        self.vertices = np.asarray(vertices, float)
        self.triangles = np.asarray(triangles, np.int64)
        self.boundary_loop = np.asarray(boundary_loop, np.int64)
        if check:
            self._validate()

    def _validate(self):
        v, f = len(self.vertices), len(self.triangles)
        e = len(self.edges)
        if v - e + f != 1:
            raise ValueError("not a combinatorial disc (V - E + F != 1)")
        r = np.linalg.norm(self.vertices[self.boundary_loop], axis=1)
        if np.any(np.abs(r - 1.0) > 1e-12):
            raise ValueError("boundary vertices must lie on the unit circle")
        interior = np.setdiff1d(np.arange(v), self.boundary_loop)
        if len(interior) and np.any(np.linalg.norm(self.vertices[interior], axis=1) >= 1.0):
            raise ValueError("interior vertices must lie strictly inside the disc")
        if np.any(self.tri_areas <= 0.0):
            raise ValueError("degenerate or misoriented domain triangle")

    @cached_property
    def edges(self):
        pairs = set()
        for a, b, c in self.triangles:
            for u, w in ((a, b), (b, c), (c, a)):
                pairs.add((min(u, w), max(u, w)))
        return np.array(sorted(pairs), np.int64)

    @cached_property
    def edge_index(self):
        return {tuple(e): i for i, e in enumerate(map(tuple, self.edges))}

    @cached_property
    def tri_edges(self):
        out = np.empty((len(self.triangles), 3), np.int64)
        for t, (a, b, c) in enumerate(self.triangles):
            for k, (u, w) in enumerate(((a, b), (b, c), (c, a))):
                out[t, k] = self.edge_index[(min(u, w), max(u, w))]
        return out

    @cached_property
    def tri_areas(self):
        p = self.vertices[self.triangles]
        u = p[:, 1] - p[:, 0]
        w = p[:, 2] - p[:, 0]
        return 0.5 * (u[:, 0] * w[:, 1] - u[:, 1] * w[:, 0])

    @cached_property
    def form_solvers(self):
        """Per-triangle inverse of the 3x3 system mapping (q11, q12, q22) to the
        squared lengths of the three edge vectors."""
        p = self.vertices[self.triangles]
        evec = np.stack([p[:, 1] - p[:, 0], p[:, 2] - p[:, 1], p[:, 0] - p[:, 2]], axis=1)
        M = np.stack([evec[:, :, 0] ** 2, 2.0 * evec[:, :, 0] * evec[:, :, 1],
                      evec[:, :, 1] ** 2], axis=2)
        try:
            return np.linalg.inv(M)
        except np.linalg.LinAlgError as exc:
            raise SingularSystem("degenerate domain triangle") from exc

    @cached_property
    def cot_weights(self):
        """Edge weights with trace_energy == sum_e W_e * len_e^2 (cotangent form)."""
        w = np.zeros(len(self.edges))
        p = self.vertices[self.triangles]
        for k in range(3):
            # angle at corner k is opposite the edge (k+1, k+2)
            a = p[:, k]
            b = p[:, (k + 1) % 3]
            c = p[:, (k + 2) % 3]
            u = b - a
            v = c - a
            cross = u[:, 0] * v[:, 1] - u[:, 1] * v[:, 0]
            dot = (u * v).sum(axis=1)
            cot = dot / np.abs(cross)
            eid = self.tri_edges[np.arange(len(p)), (k + 1) % 3]
            np.add.at(w, eid, 0.5 * cot)
        return w

    @cached_property
    def min_angle_deg(self):
        p = self.vertices[self.triangles]
        best = math.inf
        for k in range(3):
            u = p[:, (k + 1) % 3] - p[:, k]
            v = p[:, (k + 2) % 3] - p[:, k]
            c = (u * v).sum(axis=1) / (np.linalg.norm(u, axis=1) * np.linalg.norm(v, axis=1))
            best = min(best, float(np.degrees(np.arccos(np.clip(c, -1, 1))).min()))
        return best

    @cached_property
    def interior_vertices(self):
        return np.setdiff1d(np.arange(len(self.vertices)), self.boundary_loop)

    @cached_property
    def vertex_star(self):
        """Padded neighbor / cot-weight arrays: (V, maxdeg) neighbor ids with
        -1 padding, plus matching weights (0 on padding)."""
        nbrs = [[] for _ in range(len(self.vertices))]
        for (a, b), w in zip(self.edges, self.cot_weights):
            nbrs[a].append((b, w))
            nbrs[b].append((a, w))
        deg = max(len(x) for x in nbrs)
        nid = -np.ones((len(self.vertices), deg), np.int64)
        wgt = np.zeros((len(self.vertices), deg))
        for v, lst in enumerate(nbrs):
            for j, (u, w) in enumerate(sorted(lst)):
                nid[v, j] = u
                wgt[v, j] = w
        return nid, wgt

    @cached_property
    def interior_colors(self):
        """Greedy coloring of interior vertices; same-color vertices are never
        adjacent, so a color class updates simultaneously and deterministically."""
        nid, _ = self.vertex_star
        color = -np.ones(len(self.vertices), np.int64)
        for v in self.interior_vertices:
            used = {color[u] for u in nid[v] if u >= 0 and color[u] >= 0}
            c = 0
            while c in used:
                c += 1
            color[v] = c
        ncol = color.max() + 1 if len(self.interior_vertices) else 0
        return [np.array([v for v in self.interior_vertices if color[v] == c])
                for c in range(ncol)]

    @cached_property
    def boundary_colors(self):
        loop = self.boundary_loop
        even = loop[0::2]
        odd = loop[1::2]
        if len(loop) % 2 == 1:  # odd cycle: last vertex forms its own class
            return [even[:-1], odd, even[-1:]]
        return [even, odd]


def generate_disc_mesh(rings) -> DiscMesh:
    """Concentric-ring triangulation: center plus rings of 6*j vertices."""
    if rings < 1:
        raise ValueError("rings >= 1")
    verts = [(0.0, 0.0)]
    ring_start = [0]
    for j in range(1, rings + 1):
        ring_start.append(len(verts))
        m = 6 * j
        r = j / rings
        for k in range(m):
            a = TWO_PI * k / m
            verts.append((r * math.cos(a), r * math.sin(a)))
    tris = []
    for k in range(6):
        tris.append((0, 1 + k, 1 + (k + 1) % 6))
    for j in range(2, rings + 1):
        inner, outer = ring_start[j - 1], ring_start[j]
        m_in, m_out = 6 * (j - 1), 6 * j
        """Zip the two rings by angle: advance on whichever ring has the
        smaller next angle."""
        ai, bi = 0, 0
        while ai < m_in or bi < m_out:
            a_next = TWO_PI * (ai + 1) / m_in if ai < m_in else math.inf
            b_next = TWO_PI * (bi + 1) / m_out if bi < m_out else math.inf
            ia = inner + ai % m_in
            ib = outer + bi % m_out
            if b_next <= a_next:
                tris.append((ia, ib, outer + (bi + 1) % m_out))
                bi += 1
            else:
                tris.append((ia, ib, inner + (ai + 1) % m_in))
                tris[-1] = (ia, outer + bi % m_out, inner + (ai + 1) % m_in)
                ai += 1
    boundary = list(range(ring_start[rings], ring_start[rings] + 6 * rings))
    mesh = DiscMesh(np.array(verts), np.array(tris), np.array(boundary))
    return mesh


def subdivide_mesh(mesh: DiscMesh):
    """4-to-1 subdivision. Returns (new mesh, midpoint table {edge id: new
    vertex id}).  Boundary midpoints are pushed to the unit circle."""
    V = len(mesh.vertices)
    new_verts = [tuple(v) for v in mesh.vertices]
    mid = {}
    bset = set(map(int, mesh.boundary_loop))
    bpairs = set()
    loop = mesh.boundary_loop
    for i in range(len(loop)):
        a, b = int(loop[i]), int(loop[(i + 1) % len(loop)])
        bpairs.add((min(a, b), max(a, b)))
    for ei, (a, b) in enumerate(mesh.edges):
        p = 0.5 * (mesh.vertices[a] + mesh.vertices[b])
        if (min(a, b), max(a, b)) in bpairs:
            p = p / np.linalg.norm(p)
        mid[ei] = V + ei
        new_verts.append(tuple(p))
    tris = []
    for t, (a, b, c) in enumerate(mesh.triangles):
        mab, mbc, mca = (mid[mesh.tri_edges[t, 0]], mid[mesh.tri_edges[t, 1]],
                         mid[mesh.tri_edges[t, 2]])
        tris += [(a, mab, mca), (mab, b, mbc), (mca, mbc, c), (mab, mbc, mca)]
    new_loop = []
    for i in range(len(loop)):
        a, b = int(loop[i]), int(loop[(i + 1) % len(loop)])
        ei = mesh.edge_index[(min(a, b), max(a, b))]
        new_loop += [a, mid[ei]]
    return DiscMesh(np.array(new_verts), np.array(tris), np.array(new_loop)), mid


@dataclass
class PullbackForm:
    Q: np.ndarray
    psd_flag: bool

    @property
    def trace(self):
        return float(self.Q[0, 0] + self.Q[1, 1])

    @property
    def det(self):
        return float(self.Q[0, 0] * self.Q[1, 1] - self.Q[0, 1] ** 2)

    @property
    def lambda_max(self):
        tr, dt = self.trace, self.det
        return 0.5 * (tr + math.sqrt(max(tr * tr - 4.0 * dt, 0.0)))


class MeshMap:
    """Disc mesh plus an image point per vertex."""

    def __init__(self, mesh: DiscMesh, space, images_enc):
        self.mesh = mesh
        self.space = space
        self.images_enc = np.asarray(images_enc, float)
        if len(self.images_enc) != len(mesh.vertices):
            raise ValueError("one image per vertex required")

    @classmethod
    def from_points(cls, mesh, space, points):
        return cls(mesh, space, space.encode(points))

    @property
    def images(self):
        return self.space.decode(self.images_enc)

    def copy(self):
        return MeshMap(self.mesh, self.space, self.images_enc.copy())

    @cached_property
    def edge_image_lengths(self):
        e = self.mesh.edges
        return self.space.dist_enc(self.images_enc[e[:, 0]], self.images_enc[e[:, 1]])

    @cached_property
    def form_coeffs(self):
        """(F, 3) arrays of (q11, q12, q22) per triangle."""
        ell2 = self.edge_image_lengths[self.mesh.tri_edges] ** 2
        return np.einsum("tij,tj->ti", self.mesh.form_solvers, ell2)

    def image_point(self, tri, bary):
        """Barycentric-geodesic interpolation inside a triangle (fixed order)."""
        a, b, c = self.mesh.triangles[tri]
        wa, wb, wc = bary
        ia, ib, ic = (self.images_enc[a:a + 1], self.images_enc[b:b + 1],
                      self.images_enc[c:c + 1])
        if wa + wb <= 0:
            return self.space.decode_one(ic[0])
        q1 = self.space.geo_enc(ia, ib, np.array([wb / (wa + wb)]))
        q = self.space.geo_enc(q1, ic, np.array([wc]))
        return self.space.decode_one(q[0])

    def image_points_enc(self, tris, barys):
        """Vectorized barycentric-geodesic interpolation."""
        tri_v = self.mesh.triangles[tris]
        wa, wb, wc = barys[:, 0], barys[:, 1], barys[:, 2]
        ia = self.images_enc[tri_v[:, 0]]
        ib = self.images_enc[tri_v[:, 1]]
        ic = self.images_enc[tri_v[:, 2]]
        t1 = np.where(wa + wb > 0, wb / np.maximum(wa + wb, 1e-300), 0.0)
        q1 = self.space.geo_enc(ia, ib, t1)
        return self.space.geo_enc(q1, ic, wc)


def pullback_form(mapping: MeshMap, tri) -> PullbackForm:
    q11, q12, q22 = mapping.form_coeffs[tri]
    Q = np.array([[q11, q12], [q12, q22]])
    scale2 = max(abs(q11), abs(q22), 1e-300)
    evals = np.linalg.eigvalsh(Q)
    return PullbackForm(Q=Q, psd_flag=bool(evals[0] >= -1e-10 * scale2))


def _tri_quantities(mapping: MeshMap):
    q = mapping.form_coeffs
    tr = q[:, 0] + q[:, 2]
    det = q[:, 0] * q[:, 2] - q[:, 1] ** 2
    lam = 0.5 * (tr + np.sqrt(np.maximum(tr * tr - 4.0 * det, 0.0)))
    return tr, det, lam


def trace_energy(mapping: MeshMap) -> float:
    """Sum |T| * trace(Q_T); the solver's relaxation objective."""
    tr, _, _ = _tri_quantities(mapping)
    return float(np.sum(mapping.mesh.tri_areas * tr))


def max_stretch_energy(mapping: MeshMap) -> float:
    """Sum |T| * lambda_max(Q_T): squared largest directional stretch."""
    _, _, lam = _tri_quantities(mapping)
    return float(np.sum(mapping.mesh.tri_areas * lam))


def map_area(mapping: MeshMap) -> float:
    """Sum |T| * sqrt(det Q_T), det clamped at 0 (degenerate maps carry no area)."""
    _, det, _ = _tri_quantities(mapping)
    return float(np.sum(mapping.mesh.tri_areas * np.sqrt(np.maximum(det, 0.0))))


def tri_pullback_areas(mapping: MeshMap):
    _, det, _ = _tri_quantities(mapping)
    return mapping.mesh.tri_areas * np.sqrt(np.maximum(det, 0.0))


def conformality_ratio(mapping: MeshMap) -> float:
    """trace_energy / (2 * map_area) >= 1, with equality iff all pull-back
    forms are conformal; reported as a diagnostic, never enforced."""
    a = map_area(mapping)
    if a == 0.0:
        return math.inf
    return trace_energy(mapping) / (2.0 * a)


def export_triangle_csv(mapping: MeshMap, path):
    tr, det, lam = _tri_quantities(mapping)
    rows = [(t, tr[t], lam[t], det[t]) for t in range(len(tr))]
    dump_csv(path, ["triangle", "trace", "lambda_max", "det"], rows)


def subdivide_map(mapping: MeshMap):
    """4-to-1 refinement with new images at geodesic midpoints."""
    mesh2, mid = subdivide_mesh(mapping.mesh)
    E = mapping.mesh.edges
    mids_enc = mapping.space.geo_enc(mapping.images_enc[E[:, 0]],
                                     mapping.images_enc[E[:, 1]],
                                     np.full(len(E), 0.5))
    images2 = np.vstack([mapping.images_enc, mids_enc])
    return MeshMap(mesh2, mapping.space, images2)


class PullbackMetric:
    """Mesh skeleton with image-distance edge weights; the discrete stand-in
    for the intrinsic metric induced by the map.

    Two distance evaluators: ``graph_dists_from`` (plain Dijkstra on the
    1-skeleton; fast, overestimates by the mesh stretch factor) and
    ``surface_dists_from`` (Dijkstra with virtual-source triangle updates,
    exact on flat pieces; used where the comparison checks need metric
    accuracy)."""

    def __init__(self, mapping: MeshMap, subdivision=0):
        m = mapping
        for _ in range(int(subdivision)):
            m = subdivide_map(m)
        self.mapping = m
        self.source = mapping
        self.subdivision = int(subdivision)
        self.edge_lengths = np.array(m.edge_image_lengths, float)
        self.n_nodes = len(m.mesh.vertices)
        self._adj = None

    @cached_property
    def graph(self):
        e = self.mapping.mesh.edges
        w = self.edge_lengths
        n = self.n_nodes
        return sp.csr_matrix(
            (np.concatenate([w, w]),
             (np.concatenate([e[:, 0], e[:, 1]]), np.concatenate([e[:, 1], e[:, 0]]))),
            shape=(n, n))

    @property
    def mesh(self):
        return self.mapping.mesh

    def scale_edges(self, edge_ids, factor):
        """Corrupt selected edge weights (adversarial testing); invalidates caches."""
        self.edge_lengths[np.asarray(edge_ids, int)] *= factor
        self.__dict__.pop("graph", None)
        self._adj = None

    def graph_dists_from(self, sources):
        from scipy.sparse.csgraph import dijkstra
        return dijkstra(self.graph, directed=False, indices=sources)

    dists_from = graph_dists_from

    def _adjacency(self):
        """vertex -> list of (triangle, local slot) and vertex -> neighbor edges."""
        if self._adj is not None:
            return self._adj
        mesh = self.mapping.mesh
        v_tris = [[] for _ in range(self.n_nodes)]
        for t, tri in enumerate(mesh.triangles):
            for k in range(3):
                v_tris[tri[k]].append((t, k))
        nbrs = [[] for _ in range(self.n_nodes)]
        for ei, (a, b) in enumerate(mesh.edges):
            nbrs[a].append((b, ei))
            nbrs[b].append((a, ei))
        self._adj = (v_tris, nbrs)
        return self._adj

    def surface_dists_from(self, source):
        """Single-source distances with two-point virtual-source updates.

        For each triangle edge (a, b) with finalized values, the update for
        the opposite vertex c places a planar virtual source consistent with
        (d_a, d_b) and takes the straight distance when the ray enters through
        the edge; exact for geodesics in flat regions."""
        import heapq
        mesh = self.mapping.mesh
        L = self.edge_lengths[mesh.tri_edges]
        v_tris, nbrs = self._adjacency()
        d = np.full(self.n_nodes, np.inf)
        done = np.zeros(self.n_nodes, bool)
        d[source] = 0.0
        heap = [(0.0, int(source))]
        tris = mesh.triangles
        while heap:
            du, u = heapq.heappop(heap)
            if done[u] or du > d[u]:
                continue
            done[u] = True
            for v, ei in nbrs[u]:
                nd = du + self.edge_lengths[ei]
                if nd < d[v]:
                    d[v] = nd
                    heapq.heappush(heap, (nd, v))
            for t, k in v_tris[u]:
                tri = tris[t]
                for other_slot in range(3):
                    c = tri[other_slot]
                    if done[c]:
                        continue
                    a_slot, b_slot = [s for s in range(3) if s != other_slot]
                    a, b = tri[a_slot], tri[b_slot]
                    if not (done[a] and done[b]):
                        continue
                    nd = _virtual_source_update(
                        d[a], d[b],
                        _tri_side(L[t], a_slot, b_slot),
                        _tri_side(L[t], a_slot, other_slot),
                        _tri_side(L[t], b_slot, other_slot))
                    if nd < d[c]:
                        d[c] = nd
                        heapq.heappush(heap, (nd, int(c)))
        return d

    def boundary_nodes(self):
        return self.mapping.mesh.boundary_loop

    def max_edge_weight(self):
        return float(self.edge_lengths.max())

    def tri_angles(self):
        """Law-of-cosines angles of each triangle under pull-back edge lengths,
        (F, 3) with slot k the angle at triangle vertex k."""
        L = self.edge_lengths[self.mapping.mesh.tri_edges]
        angles = np.empty_like(L)
        for k, (adj1, adj2, opp) in enumerate(((0, 2, 1), (1, 0, 2), (2, 1, 0))):
            u, v, w = L[:, adj1], L[:, adj2], L[:, opp]
            with np.errstate(divide="ignore", invalid="ignore"):
                cosang = np.where(u * v > 0, (u * u + v * v - w * w) /
                                  np.maximum(2.0 * u * v, 1e-300), 1.0)
            angles[:, k] = np.arccos(np.clip(cosang, -1.0, 1.0))
        return angles

    def vertex_angle_sums(self):
        angs = self.tri_angles()
        out = np.zeros(self.n_nodes)
        for k in range(3):
            np.add.at(out, self.mapping.mesh.triangles[:, k], angs[:, k])
        return out


def _tri_side(L_row, s1, s2):
    """Pull-back length of the side joining local slots s1, s2 (edge slot k
    joins vertices k and k+1, so the side is slot min unless wrapping)."""
    pair = {s1, s2}
    if pair == {0, 1}:
        return L_row[0]
    if pair == {1, 2}:
        return L_row[1]
    return L_row[2]


def _virtual_source_update(da, db, lab, lac, lbc):
    """Distance at c of a planar wave consistent with (da, db) on edge (a, b)."""
    fallback = min(da + lac, db + lbc)
    if lab <= 0:
        return fallback
    # planar layout: a = (0,0), b = (lab, 0), c above the edge
    cx = (lab * lab + lac * lac - lbc * lbc) / (2.0 * lab)
    cy2 = lac * lac - cx * cx
    if cy2 <= 0:
        return fallback
    cy = math.sqrt(cy2)
    sx = (da * da - db * db + lab * lab) / (2.0 * lab)
    sy2 = da * da - sx * sx
    if sy2 < 0:
        return fallback
    sy = math.sqrt(sy2)
    # source mirrored below the edge; ray must enter through the open edge
    denom = sy + cy
    if denom <= 0:
        return fallback
    x_cross = sx + (cx - sx) * (sy / denom)
    if not (0.0 <= x_cross <= lab):
        return fallback
    return min(fallback, math.hypot(cx - sx, cy + sy))
