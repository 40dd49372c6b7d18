# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled SLERP / SIDER / SENO kernels.

Same contract as ``_fallback``; selected by ``_backend`` when importable.
"""

import numpy as np

from libc.math cimport atan2, cos, sin, sqrt

from .exceptions import DomainError

cdef double ANTIPODAL_TOL = 1e-9
cdef double COINCIDENT_TOL = 1e-12
cdef double TIE_TOL = 1e-14

# error codes returned by the C-level routines
cdef enum:
    OK = 0
    E_SLERP = 1
    E_C2A = 2
    E_C2B = 3
    E_LEFT = 4
    E_RIGHT = 5
    E_BLEND2 = 6
    E_BLEND3 = 7

_MESSAGES = {
    E_SLERP: "slerp",
    E_C2A: "SIDER2 control c2a",
    E_C2B: "SIDER2 control c2b",
    E_LEFT: "SIDER2 left arc",
    E_RIGHT: "SIDER2 right arc",
    E_BLEND2: "SIDER2 blend",
    E_BLEND3: "SIDER3 blend",
}


cdef inline double _dot(const double* a, const double* b) noexcept nogil:
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


cdef inline double _angle(const double* a, const double* b) noexcept nogil:
    cdef double cx = a[1] * b[2] - a[2] * b[1]
    cdef double cy = a[2] * b[0] - a[0] * b[2]
    cdef double cz = a[0] * b[1] - a[1] * b[0]
    return atan2(sqrt(cx * cx + cy * cy + cz * cz), _dot(a, b))


cdef inline int _slerp(const double* a, const double* b, double t, double* out) noexcept nogil:
    cdef double d = _dot(a, b)
    cdef double theta, wn, ct, st, n, w0, w1, w2, o0, o1, o2
    if d < -1.0 + ANTIPODAL_TOL:
        return 1
    theta = _angle(a, b)
    if t == 0.0 or theta < COINCIDENT_TOL:
        out[0] = a[0]; out[1] = a[1]; out[2] = a[2]
        return 0
    if t == 1.0:
        out[0] = b[0]; out[1] = b[1]; out[2] = b[2]
        return 0
    w0 = b[0] - d * a[0]
    w1 = b[1] - d * a[1]
    w2 = b[2] - d * a[2]
    wn = sqrt(w0 * w0 + w1 * w1 + w2 * w2)
    ct = cos(t * theta)
    st = sin(t * theta) / wn
    o0 = ct * a[0] + st * w0
    o1 = ct * a[1] + st * w1
    o2 = ct * a[2] + st * w2
    n = sqrt(o0 * o0 + o1 * o1 + o2 * o2)
    out[0] = o0 / n; out[1] = o1 / n; out[2] = o2 / n
    return 0


cdef inline int _controls(const double* p1, const double* p2, const double* p3,
                          double* c2a, double* c2b) noexcept nogil:
    if _slerp(p3, p2, 2.0, c2a):
        return E_C2A
    if _slerp(p1, p2, 2.0, c2b):
        return E_C2B
    return OK


cdef inline int _sider2(const double* p1, const double* p3,
                        const double* c2a, const double* c2b,
                        double t, double* out) noexcept nogil:
    cdef double left[3]
    cdef double right[3]
    if _slerp(p1, c2a, t, left):
        return E_LEFT
    if _slerp(c2b, p3, t, right):
        return E_RIGHT
    if _slerp(left, right, t, out):
        return E_BLEND2
    return OK


cdef inline int _sider3(double[:, ::1] s, double[:, ::1] ctl, int m,
                        double t, double* out) noexcept nogil:
    # s: stencil points; ctl row 2*i / 2*i+1 are (c2a, c2b) of triple i
    cdef double a[3]
    cdef double b[3]
    cdef int err
    err = _sider2(&s[m, 0], &s[m + 2, 0], &ctl[2 * m, 0], &ctl[2 * m + 1, 0], 1.5 * t, a)
    if err:
        return err
    err = _sider2(&s[m + 1, 0], &s[m + 3, 0], &ctl[2 * m + 2, 0], &ctl[2 * m + 3, 0],
                  0.5 * (3.0 * t - 1.0), b)
    if err:
        return err
    if _slerp(a, b, t, out):
        return E_BLEND3
    return OK


cdef inline int _candidate(double[:, ::1] s, double[:, ::1] ctl, int order, int m,
                           double r, double* out) noexcept nogil:
    if order == 2:
        return _sider2(&s[m, 0], &s[m + 2, 0], &ctl[2 * m, 0], &ctl[2 * m + 1, 0], r, out)
    return _sider3(s, ctl, m, r, out)


def _raise(int err, Py_ssize_t k):
    raise DomainError(f"{_MESSAGES[err]}: antipodal pair, geodesic not unique (query {k})", index=k)


def slerp_batch(const double[:, ::1] a, const double[:, ::1] b, const double[::1] t):
    cdef Py_ssize_t k, n = a.shape[0]
    out = np.empty((n, 3))
    cdef double[:, ::1] o = out
    for k in range(n):
        if _slerp(&a[k, 0], &b[k, 0], t[k], &o[k, 0]):
            _raise(E_SLERP, k)
    return out


def seno_batch(const double[:, ::1] points, const long[::1] cells, const double[::1] lam, int order, int samples):
    cdef Py_ssize_t npts = points.shape[0]
    cdef Py_ssize_t nq = cells.shape[0]
    cdef Py_ssize_t k, q, i, j
    cdef int m, best_m, err, ntri
    cdef double width, lo, r, v, best, step
    cdef double prev[3]
    cdef double cur[3]
    cdef double var[3]
    cdef int tie2[2]
    cdef int tie3[3]
    tie2[0] = 0; tie2[1] = 1
    tie3[0] = 1; tie3[1] = 0; tie3[2] = 2

    out = np.empty((nq, 3))
    choice_arr = np.zeros(nq, dtype=np.int64)
    cdef double[:, ::1] o = out
    cdef long[::1] choice = choice_arr

    if order == 1:
        for k in range(nq):
            j = cells[k]
            if _slerp(&points[j, 0], &points[(j + 1) % npts, 0], lam[k], &o[k, 0]):
                _raise(E_SLERP, k)
        return out, choice_arr

    ntri = 2 * order - 2
    s_arr = np.empty((2 * order, 3))
    ctl_arr = np.empty((2 * ntri, 3))
    cdef double[:, ::1] s = s_arr
    cdef double[:, ::1] ctl = ctl_arr
    width = 1.0 / order

    for k in range(nq):
        j = cells[k]
        for q in range(2 * order):
            i = (j - order + 1 + q) % npts
            if i < 0:
                i += npts
            s[q, 0] = points[i, 0]; s[q, 1] = points[i, 1]; s[q, 2] = points[i, 2]
        for m in range(ntri):
            err = _controls(&s[m, 0], &s[m + 1, 0], &s[m + 2, 0], &ctl[2 * m, 0], &ctl[2 * m + 1, 0])
            if err:
                _raise(err, k)

        for m in range(order):
            lo = (order - 1 - m) * width
            v = 0.0
            step = width / (samples - 1)
            for q in range(samples):
                # same rounding as numpy.linspace
                r = lo + width if q == samples - 1 else q * step + lo
                err = _candidate(s, ctl, order, m, r, cur)
                if err:
                    _raise(err, k)
                if q > 0:
                    v += _angle(prev, cur)
                prev[0] = cur[0]; prev[1] = cur[1]; prev[2] = cur[2]
            var[m] = v

        best = var[0]
        for m in range(1, order):
            if var[m] < best:
                best = var[m]
        best_m = -1
        for q in range(order):
            m = tie2[q] if order == 2 else tie3[q]
            if var[m] <= best + TIE_TOL:
                best_m = m
                break
        choice[k] = best_m
        r = (order - 1 - best_m) * width + lam[k] * width
        err = _candidate(s, ctl, order, best_m, r, &o[k, 0])
        if err:
            _raise(err, k)
    return out, choice_arr
