"""Dense complex operator kernel.

Operators are plain ``numpy`` complex square arrays. This module holds the
few primitives every other module builds on: Kronecker products,
(anti)commutators, Hermiticity checks, a Hermitian eigensolver
(Householder tridiagonalisation followed by implicit-shift QL) and the
:class:`VerificationReport` record shared by all identity checks.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from . import kernels

#: Largest operator dimension any constructor will produce.
MAX_DIM = 6000


class SizingError(ValueError):
    """Requested basis or operator is too small or too large."""


class ShapeError(ValueError):
    """Operand shapes are incompatible."""


class DomainError(ValueError):
    """Input lies outside the domain of an operation."""

    def __init__(self, message, defect=None):
        super().__init__(message)
        self.defect = defect


@dataclass(frozen=True)
class UnitSystem:
    """Values of hbar, m0, omega and c. Natural units by default."""

    hbar: float = 1.0
    m0: float = 1.0
    omega: float = 1.0
    c: float = 1.0

    def __post_init__(self):
        for name in ("hbar", "m0", "omega", "c"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise DomainError(f"{name} must be a positive finite number, got {value!r}")


NATURAL = UnitSystem()


def as_operator(a):
    """Return ``a`` as a complex128 square array, validating its shape."""
    arr = np.asarray(a, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ShapeError(f"operator must be a square matrix, got shape {arr.shape}")
    return arr


def check_dim(dim, max_dim=None):
    limit = MAX_DIM if max_dim is None else max_dim
    if dim > limit:
        raise SizingError(f"operator dimension {dim} exceeds the configured maximum {limit}")
    return dim


def kron(a, b, max_dim=None):
    a = as_operator(a)
    b = as_operator(b)
    check_dim(a.shape[0] * b.shape[0], max_dim)
    return np.kron(a, b)


def commutator(a, b, anti=False):
    """``ab - ba``, or ``ab + ba`` when ``anti`` is set."""
    a = as_operator(a)
    b = as_operator(b)
    if a.shape != b.shape:
        raise ShapeError(f"dimension mismatch: {a.shape} vs {b.shape}")
    ab = a @ b
    ba = b @ a
    return ab + ba if anti else ab - ba


def anticommutator(a, b):
    return commutator(a, b, anti=True)


def max_norm(a):
    a = np.asarray(a)
    return float(np.max(np.abs(a))) if a.size else 0.0


def hermitian_defect(a):
    a = as_operator(a)
    return max_norm(a - a.conj().T)


def hermitian_check(a, tol=1e-12):
    return hermitian_defect(a) <= tol


def block(a, idx):
    """Principal sub-block of ``a`` on the index array ``idx``."""
    idx = np.asarray(idx)
    return a[np.ix_(idx, idx)]


@dataclass
class EigenDecomposition:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray | None
    residual: float


def householder_tridiagonalize(a, block_size=32):
    """Reduce a Hermitian matrix to real symmetric tridiagonal form.

    Panel-blocked reduction: reflectors for ``block_size`` columns are
    generated against a lazily updated matrix, then the trailing block gets
    one rank-``2 * block_size`` update.

    Returns ``(d, e, blocks, phases)`` with ``a = U T U^H``,
    ``T = tridiag(e, d, e)`` real and ``U = B_0 B_1 ... diag(phases)`` where
    each block ``(y, t)`` is the compact-WY form ``B = I - y t y^H``.
    """
    a0 = np.array(a, dtype=np.complex128, copy=True)
    n = a0.shape[0]
    d = np.zeros(n)
    sub = np.zeros(max(n - 1, 0), dtype=np.complex128)
    blocks = []
    k0 = 0
    while k0 < n - 2:
        nb = min(block_size, n - 2 - k0)
        vb = np.zeros((n, nb), dtype=np.complex128)
        wb = np.zeros((n, nb), dtype=np.complex128)
        for j in range(nb):
            i = k0 + j
            col = a0[i:, i]
            if j:
                col -= vb[i:, :j] @ wb[i, :j].conj() + wb[i:, :j] @ vb[i, :j].conj()
            d[i] = col[0].real
            x = col[1:]
            tail = np.linalg.norm(x[1:])
            if tail == 0.0:
                sub[i] = x[0]
                continue
            xnorm = np.hypot(abs(x[0]), tail)
            phase = x[0] / abs(x[0]) if x[0] != 0 else 1.0
            alpha = -phase * xnorm
            v = x.copy()
            v[0] -= alpha
            v /= np.linalg.norm(v)
            sub[i] = alpha
            lo = i + 1
            p = a0[lo:, lo:] @ v
            if j:
                vt = vb[lo:, :j]
                wt = wb[lo:, :j]
                p -= vt @ (wt.conj().T @ v) + wt @ (vt.conj().T @ v)
            kappa = np.vdot(v, p).real
            vb[lo:, j] = v
            wb[lo:, j] = 2.0 * (p - kappa * v)
        k1 = k0 + nb
        tv = vb[k1:]
        tw = wb[k1:]
        a0[k1:, k1:] -= tv @ tw.conj().T + tw @ tv.conj().T
        # compact-WY factor for H_k0 ... H_k1-1, each H = I - 2 v v^H
        t = np.zeros((nb, nb), dtype=np.complex128)
        for j in range(nb):
            if not vb[:, j].any():
                continue
            t[j, j] = 2.0
            if j:
                t[:j, j] = -2.0 * (t[:j, :j] @ (vb[:, :j].conj().T @ vb[:, j]))
        blocks.append((vb, t))
        k0 = k1
    for i in range(k0, n):
        d[i] = a0[i, i].real
        if i < n - 1:
            sub[i] = a0[i + 1, i]
    e = np.zeros(n)
    phases = np.ones(n, dtype=np.complex128)
    for k in range(n - 1):
        mag = abs(sub[k])
        e[k] = mag
        phases[k + 1] = phases[k] * (sub[k] / mag) if mag > 0 else phases[k]
    return d, e, blocks, phases


def _apply_reflectors(blocks, m):
    for y, t in reversed(blocks):
        m -= y @ (t @ (y.conj().T @ m))
    return m


def eigh(a, vectors=True, herm_tol=1e-10):
    """Hermitian eigendecomposition with ascending, reproducible ordering.

    Raises :class:`DomainError` (carrying the measured defect) when ``a`` is
    not Hermitian within ``herm_tol`` relative to ``max(1, |a|_max)``.
    Ties keep the order in which the QL iteration produced them.
    """
    a = as_operator(a)
    n = a.shape[0]
    scale = max(1.0, max_norm(a))
    defect = hermitian_defect(a)
    if defect > herm_tol * scale:
        raise DomainError(f"matrix is not Hermitian (defect {defect:.3e})", defect=defect)
    h = 0.5 * (a + a.conj().T)
    if n == 0:
        return EigenDecomposition(np.zeros(0), np.zeros((0, 0), complex) if vectors else None, 0.0)
    d, e, reflectors, phases = householder_tridiagonalize(h)
    zt = np.eye(n) if vectors else None
    status = kernels.tql_implicit(d, e, zt)
    if status:
        raise DomainError(f"QL iteration failed to converge for eigenvalue {status - 1}")
    order = np.argsort(d, kind="stable")
    w = d[order]
    if not vectors:
        return EigenDecomposition(w, None, float("nan"))
    z = zt[order].T.astype(np.complex128)
    vecs = _apply_reflectors(reflectors, phases[:, None] * z)
    resid = h @ vecs - vecs * w
    residual = float(np.max(np.linalg.norm(resid, axis=0)))
    return EigenDecomposition(w, vecs, residual)


def eigvalsh(a):
    return eigh(a, vectors=False).eigenvalues


def orthonormality_defect(v):
    return max_norm(v.conj().T @ v - np.eye(v.shape[1]))


def cluster(values, gap=1e-8):
    """Group ascending values into runs whose neighbours differ by at most ``gap``."""
    groups = []
    for i, x in enumerate(values):
        if groups and x - values[groups[-1][-1]] <= gap:
            groups[-1].append(i)
        else:
            groups.append([i])
    return groups


@dataclass
class VerificationReport:
    """Outcome of one identity check; ``passed`` iff residual <= tolerance."""

    identity_id: str
    relation: str
    residual: float
    tolerance: float
    passed: bool = field(init=False)
    notes: str = ""
    values: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.tolerance > 0:
            raise DomainError("tolerance must be positive")
        self.residual = float(self.residual)
        if self.residual < 0 or np.isnan(self.residual):
            raise DomainError(f"residual must be a nonnegative number, got {self.residual}")
        self.passed = bool(self.residual <= self.tolerance)

    def to_dict(self):
        out = asdict(self)
        out["values"] = _jsonable(self.values)
        return out


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": float(obj.real), "im": float(obj.imag)}
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj
