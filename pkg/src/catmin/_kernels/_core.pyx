# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled metric kernels; mirrors catmin._kernels.fallback exactly."""

import numpy as np

cimport numpy as cnp
from libc.math cimport atan2, cos, fabs, hypot, sin, sqrt, INFINITY, M_PI

BACKEND = "compiled"

DEF SEAM_TOL = 1e-12


cdef inline double _pymod(double x, double m) nogil:
    # mirror Python semantics: result has the sign of the divisor
    cdef double r = x % m
    if r < 0:
        r += m
    return r


def cone_dist(a_in, b_in, double alpha):
    cdef double[:, :] a = np.ascontiguousarray(a_in, dtype=np.float64)
    cdef double[:, :] b = np.ascontiguousarray(b_in, dtype=np.float64)
    cdef Py_ssize_t n = a.shape[0], i
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[:] out = out_arr
    cdef double r1, t1, r2, t2, d, dang
    for i in range(n):
        r1 = a[i, 0]; t1 = a[i, 1]
        r2 = b[i, 0]; t2 = b[i, 1]
        d = _pymod(fabs(t1 - t2), alpha)
        dang = d if d < alpha - d else alpha - d
        if dang >= M_PI:
            out[i] = r1 + r2
        else:
            d = r1 * r1 + r2 * r2 - 2.0 * r1 * r2 * cos(dang)
            out[i] = sqrt(d if d > 0.0 else 0.0)
    return out_arr


def cone_geo(a_in, b_in, t_in, double alpha):
    cdef double[:, :] a = np.ascontiguousarray(a_in, dtype=np.float64)
    cdef double[:, :] b = np.ascontiguousarray(b_in, dtype=np.float64)
    cdef double[:] t = np.ascontiguousarray(t_in, dtype=np.float64)
    cdef Py_ssize_t n = a.shape[0], i
    out_arr = np.empty((n, 2), dtype=np.float64)
    cdef double[:, :] out = out_arr
    cdef double r1, t1, r2, t2, delta, dang, s, px, qx, qy, mx, my, rm, phi, sgn
    for i in range(n):
        r1 = a[i, 0]; t1 = a[i, 1]
        r2 = b[i, 0]; t2 = b[i, 1]
        delta = _pymod(t2 - t1, alpha)
        if delta > alpha / 2.0:
            delta -= alpha
        dang = fabs(delta)
        if dang >= M_PI or r1 <= 0.0 or r2 <= 0.0:
            s = t[i] * (r1 + r2)
            if s <= r1:
                out[i, 0] = r1 - s
                out[i, 1] = t1
            else:
                out[i, 0] = s - r1
                out[i, 1] = t2
            if fabs(out[i, 0]) < 1e-300:
                out[i, 0] = 0.0 if out[i, 0] >= 0 else out[i, 0]
                out[i, 1] = 0.0
        else:
            px = r1
            qx = r2 * cos(dang)
            qy = r2 * sin(dang)
            mx = px + (qx - px) * t[i]
            my = qy * t[i]
            rm = hypot(mx, my)
            phi = atan2(my, mx)
            sgn = 1.0 if delta > 0 else (-1.0 if delta < 0 else 0.0)
            out[i, 0] = rm if rm > 0.0 else 0.0
            out[i, 1] = _pymod(t1 + sgn * phi, alpha) if rm > 0.0 else 0.0
    return out_arr


cdef inline bint _in_sector(double x, double y, double alpha) nogil:
    cdef double r = hypot(x, y)
    cdef double tol = SEAM_TOL * (1.0 + r)
    cdef double c0 = y
    cdef double c1 = cos(alpha) * y - sin(alpha) * x
    return c0 >= -tol and c1 <= tol


cdef inline void _sector_interval(double px, double py, double qx, double qy,
                                  double alpha, double *lo, double *hi,
                                  bint *nonempty) nogil:
    cdef double l = 0.0, h = 1.0
    cdef double ux, uy, sgn, fp, fq, den, tau
    cdef int j
    for j in range(2):
        if j == 0:
            ux = 1.0; uy = 0.0; sgn = 1.0
        else:
            ux = cos(alpha); uy = sin(alpha); sgn = -1.0
        fp = sgn * (ux * py - uy * px)
        fq = sgn * (ux * qy - uy * qx)
        den = fq - fp
        if fp < 0 and fq < 0:
            l = 1.0
            h = 0.0
            break
        if fp < 0 and fq >= 0:
            tau = -fp / den
            if tau > l:
                l = tau
        elif fp >= 0 and fq < 0:
            tau = -fp / den
            if tau < h:
                h = tau
    lo[0] = l
    hi[0] = h
    nonempty[0] = l <= h


cdef inline double _ray_candidate(double px, double py, double qx, double qy,
                                  double ux, double uy,
                                  double *zx, double *zy, bint *ok) nogil:
    cdef double qd = qx * ux + qy * uy
    cdef double rx = 2.0 * qd * ux - qx
    cdef double ry = 2.0 * qd * uy - qy
    cdef double fp = ux * py - uy * px
    cdef double fq = ux * ry - uy * rx
    cdef double den = fq - fp
    cdef double tau, s
    if fabs(den) > 0:
        tau = -fp / den
    else:
        tau = -1.0
    zx[0] = px + tau * (rx - px)
    zy[0] = py + tau * (ry - py)
    s = zx[0] * ux + zy[0] * uy
    ok[0] = tau >= 0.0 and tau <= 1.0 and s >= 0.0
    if ok[0]:
        return hypot(px - rx, py - ry)
    return INFINITY


def glued_dist(a_in, b_in, double alpha):
    cdef double[:, :] a = np.ascontiguousarray(a_in, dtype=np.float64)
    cdef double[:, :] b = np.ascontiguousarray(b_in, dtype=np.float64)
    cdef Py_ssize_t n = a.shape[0], i
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[:] out = out_arr
    cdef double px, py, sa, qx, qy, sb, direct, lo, hi, d0, d1, apex, best, zx, zy
    cdef bint nonempty, ok
    for i in range(n):
        px = a[i, 0]; py = a[i, 1]; sa = a[i, 2]
        qx = b[i, 0]; qy = b[i, 1]; sb = b[i, 2]
        direct = hypot(px - qx, py - qy)
        if sa == sb or sa == 0.0 or sb == 0.0:
            out[i] = direct
            continue
        _sector_interval(px, py, qx, qy, alpha, &lo, &hi, &nonempty)
        if nonempty:
            out[i] = direct
            continue
        d0 = _ray_candidate(px, py, qx, qy, 1.0, 0.0, &zx, &zy, &ok)
        d1 = _ray_candidate(px, py, qx, qy, cos(alpha), sin(alpha), &zx, &zy, &ok)
        apex = hypot(px, py) + hypot(qx, qy)
        best = d0
        if d1 < best:
            best = d1
        if apex < best:
            best = apex
        out[i] = best
    return out_arr


def glued_geo(a_in, b_in, t_in, double alpha):
    cdef double[:, :] a = np.ascontiguousarray(a_in, dtype=np.float64)
    cdef double[:, :] b = np.ascontiguousarray(b_in, dtype=np.float64)
    cdef double[:] t = np.ascontiguousarray(t_in, dtype=np.float64)
    cdef Py_ssize_t n = a.shape[0], i
    out_arr = np.empty((n, 3), dtype=np.float64)
    cdef double[:, :] out = out_arr
    cdef double px, py, sa, qx, qy, sb, mx, my, lo, hi, sheet
    cdef double d0, d1, apex, z0x, z0y, z1x, z1y, zx, zy, dleg1, dleg2, total, s, f
    cdef double vx, vy
    cdef bint nonempty, ok0, ok1, same, first
    for i in range(n):
        px = a[i, 0]; py = a[i, 1]; sa = a[i, 2]
        qx = b[i, 0]; qy = b[i, 1]; sb = b[i, 2]
        same = sa == sb or sa == 0.0 or sb == 0.0
        _sector_interval(px, py, qx, qy, alpha, &lo, &hi, &nonempty)
        if same or nonempty:
            mx = px + (qx - px) * t[i]
            my = py + (qy - py) * t[i]
            if same:
                sheet = sa if sa != 0.0 else sb
            else:
                sheet = sa if t[i] < 0.5 * (lo + hi) else sb
            if _in_sector(mx, my, alpha):
                sheet = 0.0
            out[i, 0] = mx
            out[i, 1] = my
            out[i, 2] = sheet
            continue
        d0 = _ray_candidate(px, py, qx, qy, 1.0, 0.0, &z0x, &z0y, &ok0)
        d1 = _ray_candidate(px, py, qx, qy, cos(alpha), sin(alpha), &z1x, &z1y, &ok1)
        apex = hypot(px, py) + hypot(qx, qy)
        if d0 <= d1 and d0 <= apex:
            zx = z0x; zy = z0y
        elif d1 <= apex:
            zx = z1x; zy = z1y
        else:
            zx = 0.0; zy = 0.0
        dleg1 = hypot(px - zx, py - zy)
        dleg2 = hypot(qx - zx, qy - zy)
        total = dleg1 + dleg2
        s = t[i] * total
        first = s <= dleg1
        if first:
            f = s / dleg1 if dleg1 > 0 else 0.0
            vx = px + (zx - px) * f
            vy = py + (zy - py) * f
            sheet = sa
        else:
            f = (s - dleg1) / dleg2 if dleg2 > 0 else 0.0
            vx = zx + (qx - zx) * f
            vy = zy + (qy - zy) * f
            sheet = sb
        if _in_sector(vx, vy, alpha):
            sheet = 0.0
        out[i, 0] = vx
        out[i, 1] = vy
        out[i, 2] = sheet
    return out_arr
