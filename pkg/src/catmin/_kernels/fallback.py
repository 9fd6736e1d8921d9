"""Pure-numpy metric kernels for the cone and glued-plane geometries.

Same call surface as the compiled core in ``_core``.  Points are encoded as
float rows:

* cone:   ``[r, theta]`` with ``theta`` in ``[0, alpha)``; the tip is ``r == 0``
* glued:  ``[x, y, sheet]`` with sheet 0 for the shared sector, 1/2 otherwise;
  the gluing sector is ``{polar angle in [0, alpha]}`` with apex at the origin.
"""

import numpy as np

BACKEND = "python"

_SEAM_TOL = 1e-12


def cone_dist(a, b, alpha):
    a = np.asarray(a, float)
    b = np.asarray(b, float)
    r1, t1 = a[:, 0], a[:, 1]
    r2, t2 = b[:, 0], b[:, 1]
    d = np.abs(t1 - t2) % alpha
    dang = np.minimum(d, alpha - d)
    through = dang >= np.pi
    chord = np.sqrt(np.maximum(r1 * r1 + r2 * r2 - 2.0 * r1 * r2 * np.cos(dang), 0.0))
    return np.where(through, r1 + r2, chord)


def _signed_angular(t1, t2, alpha):
    # signed shortest angular step from t1 to t2 on a circle of length alpha
    d = (t2 - t1) % alpha
    return np.where(d > alpha / 2.0, d - alpha, d)


def cone_geo(a, b, t, alpha):
    a = np.asarray(a, float)
    b = np.asarray(b, float)
    t = np.asarray(t, float)
    r1, t1 = a[:, 0], a[:, 1]
    r2, t2 = b[:, 0], b[:, 1]
    delta = _signed_angular(t1, t2, alpha)
    dang = np.abs(delta)
    through = (dang >= np.pi) | (r1 <= 0.0) | (r2 <= 0.0)

    out = np.empty_like(a)

    # radial two-leg path through the tip
    total = r1 + r2
    s = t * total
    first = s <= r1
    out[:, 0] = np.where(first, r1 - s, s - r1)
    out[:, 1] = np.where(first, t1, t2)
    tipmask = through & (np.abs(out[:, 0]) < 1e-300)
    out[:, 1] = np.where(tipmask, 0.0, out[:, 1])

    # developed straight chord
    px = r1
    qx = r2 * np.cos(dang)
    qy = r2 * np.sin(dang)
    mx = px + (qx - px) * t
    my = qy * t
    rm = np.hypot(mx, my)
    phi = np.arctan2(my, np.maximum(mx, -np.inf))
    phi = np.arctan2(my, mx)
    theta = (t1 + np.sign(delta) * phi) % alpha
    dev = ~through
    out[:, 0] = np.where(dev, rm, out[:, 0])
    out[:, 1] = np.where(dev, np.where(rm > 0.0, theta, 0.0), out[:, 1])
    out[:, 0] = np.maximum(out[:, 0], 0.0)
    return out


def _in_sector(x, y, alpha):
    # sector {0 <= polar angle <= alpha}, alpha <= pi: intersection of
    # half-planes y >= 0-side of ray0 and the alpha-ray side
    c0 = y  # cross((1,0),(x,y))
    c1 = np.cos(alpha) * y - np.sin(alpha) * x  # cross(u_alpha, p)
    r = np.hypot(x, y)
    return (c0 >= -_SEAM_TOL * (1.0 + r)) & (c1 <= _SEAM_TOL * (1.0 + r))


def _segment_sector_interval(px, py, qx, qy, alpha):
    """Clip segment p+tau*(q-p), tau in [0,1], against the sector. Returns
    (lo, hi, nonempty)."""
    lo = np.zeros_like(px)
    hi = np.ones_like(px)
    # half-plane cross(u, p) * sgn >= 0 with u = (1,0): y >= 0
    for ux, uy, sgn in ((1.0, 0.0, 1.0), (np.cos(alpha), np.sin(alpha), -1.0)):
        fp = sgn * (ux * py - uy * px)
        fq = sgn * (ux * qy - uy * qx)
        den = fq - fp
        with np.errstate(divide="ignore", invalid="ignore"):
            tau = np.where(np.abs(den) > 0, -fp / np.where(den == 0, 1.0, den), 0.0)
        both_out = (fp < 0) & (fq < 0)
        lo = np.where((fp < 0) & (fq >= 0), np.maximum(lo, tau), lo)
        hi = np.where((fp >= 0) & (fq < 0), np.minimum(hi, tau), hi)
        lo = np.where(both_out, 1.0, lo)
        hi = np.where(both_out, 0.0, hi)
    return lo, hi, lo <= hi


def _ray_candidate(px, py, qx, qy, ux, uy):
    """Reflected-path length touching the ray {s*(ux,uy): s >= 0}, inf if the
    contact would be at s < 0."""
    qd = qx * ux + qy * uy
    rx = 2.0 * qd * ux - qx
    ry = 2.0 * qd * uy - qy
    # segment p -> q' crossing the ray line
    fp = ux * py - uy * px
    fq = ux * ry - uy * rx
    den = fq - fp
    with np.errstate(divide="ignore", invalid="ignore"):
        tau = np.where(np.abs(den) > 0, -fp / np.where(den == 0, 1.0, den), -1.0)
    zx = px + tau * (rx - px)
    zy = py + tau * (ry - py)
    s = zx * ux + zy * uy
    ok = (tau >= 0.0) & (tau <= 1.0) & (s >= 0.0)
    d = np.hypot(px - rx, py - ry)
    return np.where(ok, d, np.inf), zx, zy, ok


def glued_dist(a, b, alpha):
    a = np.asarray(a, float)
    b = np.asarray(b, float)
    px, py, sa = a[:, 0], a[:, 1], a[:, 2]
    qx, qy, sb = b[:, 0], b[:, 1], b[:, 2]
    direct = np.hypot(px - qx, py - qy)
    same = (sa == sb) | (sa == 0) | (sb == 0)

    lo, hi, crosses = _segment_sector_interval(px, py, qx, qy, alpha)
    d0, _, _, _ = _ray_candidate(px, py, qx, qy, 1.0, 0.0)
    d1, _, _, _ = _ray_candidate(px, py, qx, qy, np.cos(alpha), np.sin(alpha))
    apex = np.hypot(px, py) + np.hypot(qx, qy)
    detour = np.minimum(np.minimum(d0, d1), apex)
    cross_sheet = np.where(crosses, direct, detour)
    return np.where(same, direct, cross_sheet)


def _classify_sheet(x, y, fallback_sheet, alpha):
    return np.where(_in_sector(x, y, alpha), 0.0, fallback_sheet)


def glued_geo(a, b, t, alpha):
    a = np.asarray(a, float)
    b = np.asarray(b, float)
    t = np.asarray(t, float)
    px, py, sa = a[:, 0], a[:, 1], a[:, 2]
    qx, qy, sb = b[:, 0], b[:, 1], b[:, 2]
    same = (sa == sb) | (sa == 0) | (sb == 0)

    out = np.empty_like(a)

    # straight chord in a common plane copy; for a cross-sheet chord the sector
    # window [lo, hi] separates the two sheets (in-window points classify 0)
    mx = px + (qx - px) * t
    my = py + (qy - py) * t
    lo, hi, crosses = _segment_sector_interval(px, py, qx, qy, alpha)
    sheet_plane = np.where(sa != 0, sa, sb)
    cross_side = np.where(t < 0.5 * (lo + hi), sa, sb)
    sheet_chord = _classify_sheet(mx, my, np.where(same, sheet_plane, cross_side), alpha)

    # two-leg path through a boundary point z of the sector
    d0, z0x, z0y, ok0 = _ray_candidate(px, py, qx, qy, 1.0, 0.0)
    d1, z1x, z1y, ok1 = _ray_candidate(px, py, qx, qy, np.cos(alpha), np.sin(alpha))
    apex = np.hypot(px, py) + np.hypot(qx, qy)
    use0 = (d0 <= d1) & (d0 <= apex)
    use1 = (~use0) & (d1 <= apex)
    zx = np.where(use0, z0x, np.where(use1, z1x, 0.0))
    zy = np.where(use0, z0y, np.where(use1, z1y, 0.0))
    dleg1 = np.hypot(px - zx, py - zy)
    dleg2 = np.hypot(qx - zx, qy - zy)
    total = dleg1 + dleg2
    s = t * total
    first = s <= dleg1
    with np.errstate(divide="ignore", invalid="ignore"):
        f1 = np.where(dleg1 > 0, s / np.where(dleg1 == 0, 1.0, dleg1), 0.0)
        f2 = np.where(dleg2 > 0, (s - dleg1) / np.where(dleg2 == 0, 1.0, dleg2), 0.0)
    vx = np.where(first, px + (zx - px) * f1, zx + (qx - zx) * f2)
    vy = np.where(first, py + (zy - py) * f1, zy + (qy - zy) * f2)
    sheet_via = np.where(first, sa, sb)
    sheet_via = _classify_sheet(vx, vy, sheet_via, alpha)

    via = (~same) & (~crosses)
    out[:, 0] = np.where(via, vx, mx)
    out[:, 1] = np.where(via, vy, my)
    out[:, 2] = np.where(via, sheet_via, sheet_chord)
    return out
