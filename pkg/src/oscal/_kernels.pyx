# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled tridiagonal kernels.

Every function here has a line-for-line twin in :mod:`oscal._pykernels`;
:mod:`oscal.kernels` picks one of the two at import time.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, hypot, copysign, sqrt

cnp.import_array()

cdef double EPS = np.finfo(np.float64).eps
cdef double TINY = np.finfo(np.float64).tiny


def tql_implicit(double[::1] d, double[::1] e, zt=None, int max_iter=60):
    """Implicit-shift QL on a real symmetric tridiagonal matrix, in place.

    ``d`` holds the diagonal and ``e[i]`` the coupling between rows ``i`` and
    ``i + 1`` (``e[n - 1]`` is ignored). On return ``d`` holds the unsorted
    eigenvalues. When ``zt`` is given (C-contiguous, shape ``(n, n)``) its
    rows are rotated so that row ``i`` becomes ``Z[:, i]`` times the incoming
    row basis; pass the identity to get the tridiagonal eigenvectors.

    Returns 0 on success, or ``l + 1`` if eigenvalue ``l`` did not converge.
    """
    cdef Py_ssize_t n = d.shape[0]
    cdef Py_ssize_t l, m, i, k, ncol = 0
    cdef int it
    cdef double g, r, s, c, p, f, b, dd, t, floor
    cdef double[:, ::1] z
    cdef bint with_vectors = zt is not None
    cdef bint underflow
    if with_vectors:
        z = zt
        ncol = z.shape[1]
    if n == 0:
        return 0
    e[n - 1] = 0.0
    # absolute deflation floor so clusters of zero eigenvalues still split
    floor = 0.0
    for i in range(n):
        floor = max(floor, fabs(d[i]) + fabs(e[i]) + (fabs(e[i - 1]) if i else 0.0))
    floor *= EPS
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                dd = fabs(d[m]) + fabs(d[m + 1])
                if fabs(e[m]) <= EPS * dd or fabs(e[m]) <= floor:
                    break
                m += 1
            if m == l:
                break
            if it == max_iter:
                return l + 1
            it += 1
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + copysign(r, g))
            s = 1.0
            c = 1.0
            p = 0.0
            underflow = False
            i = m - 1
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                if with_vectors:
                    for k in range(ncol):
                        t = z[i + 1, k]
                        z[i + 1, k] = s * z[i, k] + c * t
                        z[i, k] = c * z[i, k] - s * t
                i -= 1
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return 0


cdef Py_ssize_t _sturm(double[::1] d, double[::1] e2, double x) nogil:
    cdef Py_ssize_t n = d.shape[0]
    cdef Py_ssize_t i, count = 0
    cdef double q = d[0] - x
    if q < 0.0:
        count += 1
    for i in range(1, n):
        if fabs(q) < TINY:
            q = -TINY
        q = d[i] - x - e2[i - 1] / q
        if q < 0.0:
            count += 1
    return count


def sturm_count(double[::1] d, double[::1] e, double x):
    """Number of eigenvalues strictly below ``x``."""
    e2 = np.square(np.asarray(e))
    return _sturm(d, e2, x)


def bisect_lowest(double[::1] d, double[::1] e, Py_ssize_t k):
    """The ``k`` lowest eigenvalues by Sturm-sequence bisection, ascending."""
    cdef Py_ssize_t n = d.shape[0]
    cdef Py_ssize_t j, step
    cdef double lo, hi, a, b, mid, tol
    cdef double[::1] e2 = np.square(np.asarray(e))
    out = np.empty(k, dtype=np.float64)
    cdef double[::1] res = out
    ae = np.abs(np.asarray(e))
    radius = ae.copy()
    radius[1:] += ae[:-1]
    radius[n - 1] = ae[n - 2] if n > 1 else 0.0
    lo = float(np.min(np.asarray(d) - radius))
    hi = float(np.max(np.asarray(d) + radius))
    tol = 4.0 * EPS * max(fabs(lo), fabs(hi), 1.0)
    with nogil:
        for j in range(k):
            a = lo
            b = hi
            for step in range(200):
                if b - a <= tol:
                    break
                mid = 0.5 * (a + b)
                if _sturm(d, e2, mid) > j:
                    b = mid
                else:
                    a = mid
            res[j] = 0.5 * (a + b)
    return out


def tridiag_solve(double[::1] d, double[::1] e, double[::1] rhs):
    """Solve ``T x = rhs`` for symmetric tridiagonal ``T`` (Thomas, no pivoting)."""
    cdef Py_ssize_t n = d.shape[0]
    cdef Py_ssize_t i
    cdef double w
    cw = np.empty(n, dtype=np.float64)
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] cp = cw
    cdef double[::1] x = out
    w = d[0]
    if fabs(w) < TINY:
        w = TINY
    cp[0] = e[0] / w if n > 1 else 0.0
    x[0] = rhs[0] / w
    for i in range(1, n):
        w = d[i] - e[i - 1] * cp[i - 1]
        if fabs(w) < TINY:
            w = TINY
        if i < n - 1:
            cp[i] = e[i] / w
        x[i] = (rhs[i] - e[i - 1] * x[i - 1]) / w
    for i in range(n - 2, -1, -1):
        x[i] -= cp[i] * x[i + 1]
    return out
