"""Flat polyhedral chart complexes.

A complex is a set of flat convex polygon charts with isometric edge-to-edge
gluings.  Distances run Dijkstra on a subdivided edge graph and then unfold
the chart sequence of the discrete path; the unfolded straight segment gives
the near-exact length whenever it stays inside the unfolded strip.
"""

import heapq
import math

import numpy as np

from .errors import GeodesicNotResolved, InvalidChart
from .space import Point, TargetSpace, TWO_PI


def _poly_is_convex(v):
    n = len(v)
    sign = 0.0
    for i in range(n):
        a, b, c = v[i], v[(i + 1) % n], v[(i + 2) % n]
        cr = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0])
        if abs(cr) < 1e-14:
            continue
        if sign == 0.0:
            sign = cr
        elif sign * cr < 0:
            return False
    return sign > 0  # also require CCW orientation


def _point_in_convex(v, p, tol=1e-9):
    n = len(v)
    for i in range(n):
        a, b = v[i], v[(i + 1) % n]
        cr = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0])
        if cr < -tol:
            return False
    return True


class Chart:
    def __init__(self, chart_id, vertices):
        self.id = str(chart_id)
        self.vertices = np.asarray(vertices, float)
        if self.vertices.ndim != 2 or self.vertices.shape[1] != 2 or len(self.vertices) < 3:
            raise InvalidChart(f"chart {chart_id!r}: need a planar polygon")
        if not _poly_is_convex(self.vertices):
            raise InvalidChart(f"chart {chart_id!r}: charts must be convex and CCW")
        self.n = len(self.vertices)

    def edge(self, k):
        return self.vertices[k % self.n], self.vertices[(k + 1) % self.n]

    def edge_length(self, k):
        a, b = self.edge(k)
        return float(np.hypot(*(b - a)))

    def corner_angle(self, k):
        a = self.vertices[(k - 1) % self.n] - self.vertices[k]
        b = self.vertices[(k + 1) % self.n] - self.vertices[k]
        c = float(np.dot(a, b) / (np.linalg.norm(a) * np.linalg.norm(b)))
        return math.acos(min(1.0, max(-1.0, c)))

    def area(self):
        v = self.vertices
        return 0.5 * abs(sum(v[i, 0] * v[(i + 1) % self.n, 1]
                             - v[(i + 1) % self.n, 0] * v[i, 1] for i in range(self.n)))


class Gluing:
    def __init__(self, chart_a, edge_a, chart_b, edge_b, reversed=True):
        self.chart_a = str(chart_a)
        self.edge_a = int(edge_a)
        self.chart_b = str(chart_b)
        self.edge_b = int(edge_b)
        self.reversed = bool(reversed)

    def to_dict(self):
        return {"chart_a": self.chart_a, "edge_a": self.edge_a,
                "chart_b": self.chart_b, "edge_b": self.edge_b,
                "reversed": self.reversed}


def _rigid_from_edges(src_a, src_b, dst_a, dst_b):
    """Rigid motion (2x2 R, offset) mapping segment src onto dst."""
    u = src_b - src_a
    v = dst_b - dst_a
    lu = np.linalg.norm(u)
    lv = np.linalg.norm(v)
    cu, su = u / lu
    cv, sv = v / lv
    # rotation taking u-direction to v-direction
    c = cu * cv + su * sv
    s = cu * sv - su * cv
    R = np.array([[c, -s], [s, c]])
    t = dst_a - R @ src_a
    return R, t


class PolyhedralComplex(TargetSpace):
    kind = "PolyhedralComplex"

    def __init__(self, charts, gluings, base_subdivision=12, tol_rel=1e-6):
        self.charts = {}
        self.chart_order = []
        for ch in charts:
            if ch.id in self.charts:
                raise InvalidChart(f"duplicate chart id {ch.id!r}")
            self.charts[ch.id] = ch
            self.chart_order.append(ch.id)
        self.gluings = list(gluings)
        self.tol_rel = float(tol_rel)
        self._validate()
        self.diameter = self._diameter_estimate()
        self.base_subdivision = int(base_subdivision)
        self._graphs = {}
        self._vertex_groups = self._merge_vertices()

    # --- construction helpers ------------------------------------------
    def _validate(self):
        seen = {}
        for g in self.gluings:
            for cid, k in ((g.chart_a, g.edge_a), (g.chart_b, g.edge_b)):
                if cid not in self.charts:
                    raise InvalidChart(f"gluing references unknown chart {cid!r}")
                key = (cid, k % self.charts[cid].n)
                if key in seen:
                    raise InvalidChart(f"edge {key} glued twice")
                seen[key] = True
            la = self.charts[g.chart_a].edge_length(g.edge_a)
            lb = self.charts[g.chart_b].edge_length(g.edge_b)
            if abs(la - lb) > 1e-9 * max(la, lb):
                raise InvalidChart("gluing is not length preserving")

    def _diameter_estimate(self):
        return max(float(np.ptp(ch.vertices, axis=0).max()) for ch in self.charts.values()) \
            * max(1, len(self.charts))

    def _edge_key(self, cid, k):
        return (cid, k % self.charts[cid].n)

    def _glued_partner(self):
        partner = {}
        for g in self.gluings:
            ka = self._edge_key(g.chart_a, g.edge_a)
            kb = self._edge_key(g.chart_b, g.edge_b)
            partner[ka] = (kb, g.reversed)
            partner[kb] = (ka, g.reversed)
        return partner

    def _merge_vertices(self):
        """Union-find on (chart, vertex) through gluing endpoint identifications."""
        parent = {}

        def find(x):
            while parent.setdefault(x, x) != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(a, b):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb

        for cid, ch in self.charts.items():
            for k in range(ch.n):
                find((cid, k))
        for g in self.gluings:
            ca, cb = self.charts[g.chart_a], self.charts[g.chart_b]
            a0, a1 = g.edge_a % ca.n, (g.edge_a + 1) % ca.n
            b0, b1 = g.edge_b % cb.n, (g.edge_b + 1) % cb.n
            if g.reversed:
                union((g.chart_a, a0), (g.chart_b, b1))
                union((g.chart_a, a1), (g.chart_b, b0))
            else:
                union((g.chart_a, a0), (g.chart_b, b0))
                union((g.chart_a, a1), (g.chart_b, b1))
        groups = {}
        for cid, ch in self.charts.items():
            for k in range(ch.n):
                groups.setdefault(find((cid, k)), []).append((cid, k))
        return list(groups.values())

    # --- graph ------------------------------------------------------------
    def _graph(self, m):
        if m in self._graphs:
            return self._graphs[m]
        partner = self._glued_partner()
        # nodes: merged chart vertices, then m interior points per edge
        # (glued edges share their nodes)
        node_coords = []      # list of dict chart -> (x, y)
        vertex_node = {}
        for gi, group in enumerate(self._vertex_groups):
            coords = {}
            for cid, k in group:
                coords.setdefault(cid, tuple(self.charts[cid].vertices[k]))
            node_coords.append(coords)
            for key in group:
                vertex_node[key] = gi
        edge_nodes = {}
        done = set()
        for cid, ch in self.charts.items():
            for k in range(ch.n):
                key = (cid, k)
                if key in done:
                    continue
                pkey = partner.get(key)
                a, b = ch.edge(k)
                ids = []
                for j in range(1, m + 1):
                    s = j / (m + 1.0)
                    coords = {cid: tuple(a + s * (b - a))}
                    if pkey is not None:
                        (pcid, pk), rev = pkey
                        pa, pb = self.charts[pcid].edge(pk)
                        sp = 1.0 - s if rev else s
                        coords[pcid] = tuple(pa + sp * (pb - pa))
                    node_coords.append(coords)
                    ids.append(len(node_coords) - 1)
                edge_nodes[key] = ids
                done.add(key)
                if pkey is not None:
                    (pcid, pk), rev = pkey
                    edge_nodes[(pcid, pk)] = ids[::-1] if rev else ids
                    done.add((pcid, pk))
        # chart membership and node -> edge reverse index
        chart_nodes = {cid: [] for cid in self.charts}
        for ni, coords in enumerate(node_coords):
            for cid in coords:
                chart_nodes[cid].append(ni)
        node_edges = {}
        for key, ids in edge_nodes.items():
            for ni in ids:
                node_edges.setdefault(ni, []).append(key)
        # adjacency: complete within each (convex) chart
        adj = [[] for _ in node_coords]
        for cid, nodes in chart_nodes.items():
            pts = np.array([node_coords[n][cid] for n in nodes])
            for i in range(len(nodes)):
                d = np.hypot(pts[:, 0] - pts[i, 0], pts[:, 1] - pts[i, 1])
                for j in range(i + 1, len(nodes)):
                    adj[nodes[i]].append((nodes[j], float(d[j])))
                    adj[nodes[j]].append((nodes[i], float(d[j])))
        graph = {"node_coords": node_coords, "chart_nodes": chart_nodes,
                 "adj": adj, "vertex_node": vertex_node, "edge_nodes": edge_nodes,
                 "node_edges": node_edges, "partner": partner}
        self._graphs[m] = graph
        return graph

    # --- encoding ---------------------------------------------------------
    def encode_one(self, p):
        if p.chart not in self.charts:
            raise InvalidChart(f"unknown chart {p.chart!r}")
        x, y = p.coords
        if not _point_in_convex(self.charts[p.chart].vertices, (x, y),
                                tol=1e-9 * (1.0 + self.diameter)):
            raise InvalidChart(f"coords outside chart {p.chart!r}")
        return np.array([float(self.chart_order.index(p.chart)), x, y])

    def decode_one(self, row):
        ci, x, y = row
        return Point(self.chart_order[int(round(ci))], (float(x), float(y)))

    def point(self, chart, x, y):
        return Point(str(chart), (float(x), float(y)))

    # --- shortest paths -----------------------------------------------------
    def _dijkstra_path(self, graph, p_chart, p_xy, q_chart, q_xy, exclude=()):
        node_coords = graph["node_coords"]
        adj = graph["adj"]
        n = len(node_coords)
        dist = [math.inf] * (n + 2)
        prev = [-1] * (n + 2)
        SRC, DST = n, n + 1
        for ni in exclude:
            dist[ni] = -math.inf  # poisoned: relaxations can never improve it
        # temp edges from p / to q
        src_edges = []
        for ni in graph["chart_nodes"][p_chart]:
            w = math.hypot(node_coords[ni][p_chart][0] - p_xy[0],
                           node_coords[ni][p_chart][1] - p_xy[1])
            src_edges.append((ni, w))
        dst_w = {}
        for ni in graph["chart_nodes"][q_chart]:
            w = math.hypot(node_coords[ni][q_chart][0] - q_xy[0],
                           node_coords[ni][q_chart][1] - q_xy[1])
            dst_w[ni] = min(dst_w.get(ni, math.inf), w)
        direct = math.hypot(p_xy[0] - q_xy[0], p_xy[1] - q_xy[1]) \
            if p_chart == q_chart else math.inf
        dist[SRC] = 0.0
        heap = [(0.0, SRC)]
        while heap:
            d, u = heapq.heappop(heap)
            if d > dist[u]:
                continue
            if u == DST:
                break
            if u == SRC:
                nbrs = src_edges
            else:
                nbrs = adj[u]
                if u in dst_w:
                    nd = d + dst_w[u]
                    if nd < dist[DST]:
                        dist[DST] = nd
                        prev[DST] = u
                        heapq.heappush(heap, (nd, DST))
            for v, w in nbrs:
                nd = d + w
                if nd < dist[v]:
                    dist[v] = nd
                    prev[v] = u
                    heapq.heappush(heap, (nd, v))
        if direct <= dist[DST]:
            return direct, []
        path = []
        u = DST
        while u != SRC and u != -1:
            u = prev[u]
            if u != SRC and u != -1:
                path.append(u)
        path.reverse()
        return dist[DST], path

    def _unfold_between(self, graph, chain, start_opts, end_opts):
        """Unfold the chart chain visited by edge-nodes ``chain`` and try a
        straight segment.  ``start_opts`` / ``end_opts`` map chart ids to local
        coordinates of the leg endpoints.  Returns (L, frames, p0, p1,
        edge_pts) or None when the straight segment leaves the strip."""
        node_coords = graph["node_coords"]
        partner = graph["partner"]
        node_edges = graph["node_edges"]
        first_charts = set(node_coords[chain[0]]) if chain else set(end_opts)
        start_candidates = [c for c in start_opts if c in first_charts] or list(start_opts)
        cur = start_candidates[0]
        R = np.eye(2)
        t = np.zeros(2)
        frames = [(cur, R.copy(), t.copy())]
        edge_pts = []
        for ni in chain:
            charts = set(node_coords[ni])
            others = charts - {cur}
            if not others:
                continue  # node on an unglued edge of the current chart
            nxt = sorted(others)[0]
            found = None
            for (cid, k) in node_edges.get(ni, []):
                if cid != cur:
                    continue
                pk = partner.get(self._edge_key(cid, k))
                if pk and pk[0][0] == nxt:
                    found = (self._edge_key(cid, k), pk[0], pk[1])
                    break
            if found is None:
                return None
            (cid, k), (pcid, pke), rev = found
            a, b = self.charts[cid].edge(k)
            pa, pb = self.charts[pcid].edge(pke)
            src_a, src_b = (pb, pa) if rev else (pa, pb)
            Rg, tg = _rigid_from_edges(src_a, src_b, a, b)
            edge_pts.append((R @ a + t, R @ b + t))
            t = R @ tg + t
            R = R @ Rg
            frames.append((pcid, R.copy(), t.copy()))
            cur = pcid
        if cur not in end_opts:
            return None
        R0, t0 = frames[0][1], frames[0][2]
        p0 = R0 @ np.array(start_opts[frames[0][0]]) + t0
        p1 = R @ np.array(end_opts[cur]) + t
        seg = p1 - p0
        L = float(np.hypot(*seg))
        for (ea, eb) in edge_pts:
            d1 = eb - ea
            den = seg[0] * d1[1] - seg[1] * d1[0]
            if abs(den) < 1e-15:
                return None
            r = ea - p0
            s = (r[0] * d1[1] - r[1] * d1[0]) / den
            u = (r[0] * seg[1] - r[1] * seg[0]) / den
            if not (-1e-9 <= s <= 1 + 1e-9 and -1e-9 <= u <= 1 + 1e-9):
                return None
        return L, frames, p0, p1, edge_pts

    def _resolve(self, p: Point, q: Point):
        """Distance + path evaluator, refining subdivision until stable.

        Two Dijkstra passes per level: one free, one avoiding interior chart
        vertices.  The vertex-avoiding path always unfolds to a straight
        segment when the true geodesic misses all vertices; the free path
        covers genuine through-vertex geodesics (radial legs are exact).
        """
        tol = self.tol_rel * self.diameter
        prev = None
        for m in (self.base_subdivision, 2 * self.base_subdivision,
                  4 * self.base_subdivision):
            graph = self._graph(m)
            vertex_ids = set(graph["vertex_node"].values())
            best = None
            for exclude in ((), vertex_ids):
                d_graph, path = self._dijkstra_path(graph, p.chart, p.coords,
                                                    q.chart, q.coords,
                                                    exclude=exclude)
                if not math.isfinite(d_graph):
                    continue
                d, evalr = self._exactify(graph, path, p, q, d_graph)
                if best is None or d < best[0]:
                    best = (d, evalr)
            d, evalr = best
            if prev is not None and abs(d - prev) <= tol:
                return d, evalr
            prev = d
        return d, evalr

    def _anchor_opts(self, graph, anchor):
        kind, a, b = anchor
        if kind == "pt":
            return {a: b}
        return dict(graph["node_coords"][a])

    def _exactify(self, graph, path, p, q, d_graph):
        if not path:
            def ev(t, p=p, q=q):
                a = np.array(p.coords) + t * (np.array(q.coords) - np.array(p.coords))
                return Point(p.chart, tuple(a))
            return d_graph, ev
        vertex_ids = set(graph["vertex_node"].values())
        anchors = [("pt", p.chart, tuple(p.coords))]
        for ni in path:
            anchors.append(("vertex" if ni in vertex_ids else "node", ni, None))
        anchors.append(("pt", q.chart, tuple(q.coords)))
        # legs between vertex anchors unfold independently
        legs = []
        cur = anchors[0]
        buf = []
        for a in anchors[1:]:
            if a[0] == "vertex" or a is anchors[-1]:
                legs.append((cur, buf, a))
                cur = a
                buf = []
            else:
                buf.append(a[1])
        total = 0.0
        piece_descs = []
        for (start, chain, end) in legs:
            s_opts = self._anchor_opts(graph, start)
            e_opts = self._anchor_opts(graph, end)
            res = self._unfold_between(graph, chain, s_opts, e_opts) if chain else None
            if res is None:
                # polyline through discrete nodes; consecutive stops share a chart
                stops = [s_opts] + [self._anchor_opts(graph, ("node", ni, None))
                                    for ni in chain] + [e_opts]
                L = 0.0
                segs = []
                for o1, o2 in zip(stops, stops[1:]):
                    shared = sorted(set(o1) & set(o2))
                    if not shared:
                        raise GeodesicNotResolved("path pieces share no chart")
                    cid = shared[0]
                    xy1, xy2 = o1[cid], o2[cid]
                    seglen = math.hypot(xy2[0] - xy1[0], xy2[1] - xy1[1])
                    segs.append((seglen, cid, xy1, xy2))
                    L += seglen
                piece_descs.append(("polyline", L, segs))
            else:
                L, frames, p0, p1, edge_pts = res
                piece_descs.append(("straight", L, (frames, p0, p1)))
            total += L

        def ev(t):
            s = t * total
            for idx, (kind, L, data) in enumerate(piece_descs):
                if s > L and idx < len(piece_descs) - 1:
                    s -= L
                    continue
                s = min(s, L)
                if kind == "polyline":
                    for seglen, cid, xy1, xy2 in data:
                        if s > seglen and seglen > 0:
                            s -= seglen
                            continue
                        f = 0.0 if seglen == 0 else min(1.0, s / seglen)
                        return Point(cid, (xy1[0] + f * (xy2[0] - xy1[0]),
                                           xy1[1] + f * (xy2[1] - xy1[1])))
                    seglen, cid, xy1, xy2 = data[-1]
                    return Point(cid, tuple(xy2))
                frames, p0, p1 = data
                f = 0.0 if L == 0 else min(1.0, s / L)
                g = p0 + f * (p1 - p0)
                for cid, R, tt in reversed(frames):
                    local = R.T @ (g - tt)
                    if _point_in_convex(self.charts[cid].vertices, local,
                                        tol=1e-7 * (1.0 + self.diameter)):
                        return Point(cid, tuple(local))
                raise GeodesicNotResolved("unfolded point not locatable")
            raise GeodesicNotResolved("parameter out of range")

        return total, ev

    # --- TargetSpace surface ---------------------------------------------
    def dist_enc(self, a, b):
        a = np.asarray(a, float)
        b = np.asarray(b, float)
        out = np.empty(len(a))
        for i in range(len(a)):
            p = self.decode_one(a[i])
            q = self.decode_one(b[i])
            out[i] = self._resolve(p, q)[0] if p != q else 0.0
        return out

    def geo_enc(self, a, b, t):
        a = np.asarray(a, float)
        b = np.asarray(b, float)
        t = np.asarray(t, float)
        rows = []
        for i in range(len(a)):
            p = self.decode_one(a[i])
            q = self.decode_one(b[i])
            if p == q:
                rows.append(self.encode_one(p))
                continue
            _, ev = self._resolve(p, q)
            rows.append(self.encode_one(ev(float(t[i]))))
        return np.array(rows)

    def geodesic_point(self, p, q, t):
        if t == 0.0 or p == q:
            return p
        if t == 1.0:
            return q
        _, ev = self._resolve(p, q)
        return ev(float(t))

    def distance(self, p, q):
        if p == q:
            return 0.0
        return self._resolve(p, q)[0]

    def link_length(self, v: Point):
        ch = self.charts[v.chart]
        for group in self._vertex_groups:
            for (cid, k) in group:
                if cid == v.chart and np.allclose(ch.vertices[k], v.coords, atol=1e-9):
                    return sum(self.charts[c].corner_angle(kk) for c, kk in group)
        return TWO_PI  # interior chart point

    def _vertex_is_interior(self, group):
        partner = self._glued_partner()
        for cid, k in group:
            n = self.charts[cid].n
            for ek in (k, (k - 1) % n):
                if self._edge_key(cid, ek) not in partner:
                    return False
        return True

    def interior_singular_points(self):
        out = []
        for group in self._vertex_groups:
            if self._vertex_is_interior(group):
                cid, k = group[0]
                out.append(Point(cid, tuple(self.charts[cid].vertices[k])))
        return out

    def sample_points(self, n, rng, radius=None):
        ids = self.chart_order
        areas = np.array([self.charts[c].area() for c in ids])
        probs = areas / areas.sum()
        counts = rng.multinomial(n, probs)
        pts = []
        for cid, cnt in zip(ids, counts):
            ch = self.charts[cid]
            v = ch.vertices
            tri_areas = []
            for i in range(1, ch.n - 1):
                tri_areas.append(0.5 * abs(np.cross(v[i] - v[0], v[i + 1] - v[0])))
            tri_areas = np.array(tri_areas)
            tri_idx = rng.choice(len(tri_areas), size=cnt, p=tri_areas / tri_areas.sum()) \
                if cnt else []
            for ti in tri_idx:
                r1, r2 = rng.random(2)
                if r1 + r2 > 1:
                    r1, r2 = 1 - r1, 1 - r2
                p = v[0] + r1 * (v[ti + 1] - v[0]) + r2 * (v[ti + 2] - v[0])
                pts.append(Point(cid, tuple(p)))
        return pts

    def to_dict(self):
        return {
            "kind": self.kind,
            "charts": [{"id": cid, "vertices": self.charts[cid].vertices.tolist()}
                       for cid in self.chart_order],
            "gluings": [g.to_dict() for g in self.gluings],
        }

    @classmethod
    def from_dict(cls, data):
        charts = [Chart(c["id"], c["vertices"]) for c in data["charts"]]
        gluings = [Gluing(g["chart_a"], g["edge_a"], g["chart_b"], g["edge_b"],
                          g.get("reversed", True)) for g in data.get("gluings", [])]
        return cls(charts, gluings)


def cone_complex(alpha, wedges=12, radius=4.0):
    """Truncated Euclidean cone of total angle ``alpha`` built from flat
    triangle charts; used to cross-check the polyhedral path machinery
    against the closed-form cone metric."""
    beta = alpha / wedges
    charts = []
    gluings = []
    for i in range(wedges):
        v = [(0.0, 0.0), (radius, 0.0),
             (radius * math.cos(beta), radius * math.sin(beta))]
        charts.append(Chart(f"w{i}", v))
    for i in range(wedges):
        j = (i + 1) % wedges
        # edge 2 of chart i (outer leg -> apex) onto edge 0 of chart j (apex -> leg)
        gluings.append(Gluing(f"w{i}", 2, f"w{j}", 0, reversed=True))
    return PolyhedralComplex(charts, gluings)


def lshape_complex():
    """Two flat rectangles glued along one edge (unfolds to a flat strip)."""
    a = Chart("a", [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)])
    b = Chart("b", [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)])
    # top edge of a (edge 2: (1,1)->(0,1)) to bottom edge of b (edge 0: (0,0)->(1,0))
    return PolyhedralComplex([a, b], [Gluing("a", 2, "b", 0, reversed=True)])
