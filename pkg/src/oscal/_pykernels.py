"""Pure-Python twins of the compiled kernels in ``_kernels.pyx``.

Same algorithms, same signatures, same in-place conventions. Loops that the
compiled version runs elementwise are vectorised with numpy where that does
not change the order of floating-point operations that matter.
"""
import math

import numpy as np

EPS = np.finfo(np.float64).eps
TINY = np.finfo(np.float64).tiny


def tql_implicit(d, e, zt=None, max_iter=60):
    """Implicit-shift QL, in place. See ``oscal._kernels.tql_implicit``."""
    n = d.shape[0]
    if n == 0:
        return 0
    e[n - 1] = 0.0
    # absolute deflation floor so clusters of zero eigenvalues still split
    ae = np.abs(e)
    floor = EPS * float(np.max(np.abs(d) + ae + np.concatenate(([0.0], ae[:-1]))))
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= EPS * dd or abs(e[m]) <= floor:
                    break
                m += 1
            if m == l:
                break
            if it == max_iter:
                return l + 1
            it += 1
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            underflow = False
            i = m - 1
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
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
                if zt is not None:
                    t = zt[i + 1].copy()
                    zt[i + 1] = s * zt[i] + c * t
                    zt[i] = c * zt[i] - s * t
                i -= 1
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return 0


def _sturm_many(d, e2, xs):
    # counts for a vector of shifts at once; the recurrence over rows stays sequential
    q = d[0] - xs
    count = (q < 0.0).astype(np.int64)
    for i in range(1, d.shape[0]):
        q = np.where(np.abs(q) < TINY, -TINY, q)
        q = d[i] - xs - e2[i - 1] / q
        count += q < 0.0
    return count


def sturm_count(d, e, x):
    """Number of eigenvalues strictly below ``x``."""
    e2 = np.square(np.asarray(e, dtype=np.float64))
    return int(_sturm_many(np.asarray(d, dtype=np.float64), e2, np.array([x], dtype=np.float64))[0])


def bisect_lowest(d, e, k):
    """The ``k`` lowest eigenvalues by Sturm-sequence bisection, ascending."""
    d = np.asarray(d, dtype=np.float64)
    e = np.asarray(e, dtype=np.float64)
    n = d.shape[0]
    e2 = np.square(e)
    ae = np.abs(e)
    radius = ae.copy()
    radius[1:] += ae[:-1]
    radius[n - 1] = ae[n - 2] if n > 1 else 0.0
    lo = float(np.min(d - radius))
    hi = float(np.max(d + radius))
    tol = 4.0 * EPS * max(abs(lo), abs(hi), 1.0)
    j = np.arange(k)
    a = np.full(k, lo)
    b = np.full(k, hi)
    for _ in range(200):
        active = b - a > tol
        if not active.any():
            break
        mid = 0.5 * (a + b)
        above = _sturm_many(d, e2, mid) > j
        b = np.where(active & above, mid, b)
        a = np.where(active & ~above, mid, a)
    return 0.5 * (a + b)


def tridiag_solve(d, e, rhs):
    """Solve ``T x = rhs`` for symmetric tridiagonal ``T`` (Thomas, no pivoting)."""
    n = d.shape[0]
    cp = np.empty(n)
    x = np.empty(n)
    w = d[0] if abs(d[0]) >= TINY else TINY
    cp[0] = e[0] / w if n > 1 else 0.0
    x[0] = rhs[0] / w
    for i in range(1, n):
        w = d[i] - e[i - 1] * cp[i - 1]
        if abs(w) < TINY:
            w = TINY
        if i < n - 1:
            cp[i] = e[i] / w
        x[i] = (rhs[i] - e[i - 1] * x[i - 1]) / w
    for i in range(n - 2, -1, -1):
        x[i] -= cp[i] * x[i + 1]
    return x
