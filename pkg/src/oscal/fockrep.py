"""Truncated Fock bases, canonical operators and constant matrix sets.

Operators on a spinor space times a Fock space are stored spinor-major:
``kron(spinor_matrix, fock_matrix)``.

For an identity that is a polynomial of degree ``d`` in the ladder
operators, truncation only corrupts matrix elements that touch the top
``d`` shells. :func:`interior_projector` and :func:`interior_indices`
select the complement.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .opkernel import (
    NATURAL,
    DomainError,
    SizingError,
    check_dim,
    commutator,
    hermitian_check,
    kron,
    max_norm,
)

MIN_CUTOFF_1D = 4
MIN_QUANTA_3D = 4


@dataclass(frozen=True)
class FockBasis1D:
    """States |0>, ..., |N-1>."""

    cutoff: int

    def __post_init__(self):
        if int(self.cutoff) != self.cutoff or self.cutoff < MIN_CUTOFF_1D:
            raise SizingError(f"1D cutoff must be an integer >= {MIN_CUTOFF_1D}, got {self.cutoff}")

    @property
    def size(self):
        return self.cutoff

    @property
    def max_quanta(self):
        return self.cutoff - 1

    @cached_property
    def quanta(self):
        return np.arange(self.cutoff)


@dataclass(frozen=True)
class FockBasis3D:
    """Occupation triples with ``n1 + n2 + n3 <= max_quanta``.

    Ordered by total quanta, then lexicographically, so every total-quanta
    projector is a leading principal block.
    """

    max_quanta: int
    states: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if int(self.max_quanta) != self.max_quanta or self.max_quanta < 0:
            raise SizingError(f"max_quanta must be a nonnegative integer, got {self.max_quanta}")
        states = []
        for total in range(self.max_quanta + 1):
            for n1 in range(total + 1):
                for n2 in range(total - n1 + 1):
                    states.append((n1, n2, total - n1 - n2))
        object.__setattr__(self, "states", tuple(states))

    @property
    def size(self):
        return len(self.states)

    @staticmethod
    def count(max_quanta):
        return (max_quanta + 1) * (max_quanta + 2) * (max_quanta + 3) // 6

    @cached_property
    def index(self):
        return {s: i for i, s in enumerate(self.states)}

    @cached_property
    def quanta(self):
        return np.array([sum(s) for s in self.states])


def _check_cutoff(n):
    if int(n) != n or n < MIN_CUTOFF_1D:
        raise SizingError(f"cutoff must be an integer >= {MIN_CUTOFF_1D}, got {n}")


def ladder_1d(n):
    """Annihilation and creation operators on ``n`` Fock states."""
    _check_cutoff(n)
    check_dim(n)
    a = np.diag(np.sqrt(np.arange(1, n, dtype=float)), 1).astype(np.complex128)
    return a, a.conj().T


def canonical_ops_1d(n, units=NATURAL):
    """Position, momentum and oscillator Hamiltonian on ``n`` Fock states."""
    a, ad = ladder_1d(n)
    hbar, m0, w = units.hbar, units.m0, units.omega
    q = np.sqrt(hbar / (2 * m0 * w)) * (a + ad)
    p = 1j * np.sqrt(hbar * m0 * w / 2) * (ad - a)
    h = 0.5 * (p @ p / m0 + m0 * w**2 * (q @ q))
    return q, p, h


def ladder_3d(basis):
    """Annihilation operators ``(a1, a2, a3)`` on a graded 3D basis."""
    if basis.max_quanta < MIN_QUANTA_3D:
        raise SizingError(f"max_quanta must be >= {MIN_QUANTA_3D}, got {basis.max_quanta}")
    dim = check_dim(basis.size)
    ops = []
    for axis in range(3):
        a = np.zeros((dim, dim), dtype=np.complex128)
        for col, state in enumerate(basis.states):
            if state[axis]:
                lowered = list(state)
                lowered[axis] -= 1
                a[basis.index[tuple(lowered)], col] = np.sqrt(state[axis])
        ops.append(a)
    return tuple(ops)


@dataclass
class CanonicalOps3D:
    basis: FockBasis3D
    q: tuple
    p: tuple
    h_ho: np.ndarray
    L: tuple


def canonical_ops_3d(basis, units=NATURAL, spinor_dim=4):
    """Component operators, oscillator Hamiltonian and orbital angular momentum.

    ``spinor_dim`` only enters the size guard: the operators are returned on
    the bare Fock space, but callers tensor them with a spinor factor.
    """
    check_dim(basis.size * spinor_dim)
    hbar, m0, w = units.hbar, units.m0, units.omega
    q, p = [], []
    for a in ladder_3d(basis):
        ad = a.conj().T
        q.append(np.sqrt(hbar / (2 * m0 * w)) * (a + ad))
        p.append(1j * np.sqrt(hbar * m0 * w / 2) * (ad - a))
    h = sum(0.5 * (pi @ pi / m0 + m0 * w**2 * (qi @ qi)) for qi, pi in zip(q, p))
    L = tuple(q[(k + 1) % 3] @ p[(k + 2) % 3] - q[(k + 2) % 3] @ p[(k + 1) % 3] for k in range(3))
    return CanonicalOps3D(basis, tuple(q), tuple(p), h, L)


def interior_mask(basis, buffer=2):
    """Boolean mask of states at least ``buffer`` shells below the top."""
    if int(buffer) != buffer or buffer < 1:
        raise DomainError(f"buffer must be a positive integer, got {buffer}")
    top = basis.max_quanta
    cutoff = basis.cutoff if isinstance(basis, FockBasis1D) else basis.max_quanta
    if buffer >= cutoff:
        raise DomainError(f"buffer {buffer} must be smaller than the cutoff {cutoff}")
    return basis.quanta <= top - buffer


def interior_indices(basis, buffer=2, spinor_dim=1):
    """Indices of interior states in ``C^spinor_dim (x) Fock``."""
    mask = np.tile(interior_mask(basis, buffer), spinor_dim)
    return np.flatnonzero(mask)


def interior_projector(basis, buffer=2, spinor_dim=1):
    mask = np.tile(interior_mask(basis, buffer), spinor_dim)
    return np.diag(mask.astype(np.complex128))


def top_shell_projector(basis, buffer=2, spinor_dim=1):
    mask = ~np.tile(interior_mask(basis, buffer), spinor_dim)
    return np.diag(mask.astype(np.complex128))


# --- constant matrix sets -------------------------------------------------

I2 = np.eye(2, dtype=np.complex128)
SIGMA = (
    np.array([[0, 1], [1, 0]], dtype=np.complex128),
    np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    np.array([[1, 0], [0, -1]], dtype=np.complex128),
)


@dataclass(frozen=True)
class CliffordSet:
    """Pauli matrices, Dirac matrices (Dirac representation) and spin."""

    hbar: float = 1.0

    @cached_property
    def pauli(self):
        return SIGMA

    @cached_property
    def beta(self):
        return np.kron(SIGMA[2], I2)

    @cached_property
    def alpha(self):
        return tuple(np.kron(SIGMA[0], s) for s in SIGMA)

    @cached_property
    def Sigma(self):
        return tuple(np.kron(I2, s) for s in SIGMA)

    @cached_property
    def spin(self):
        return tuple(0.5 * self.hbar * s for s in self.Sigma)


def clifford_defects(cs=None):
    """Max-norm defects of the defining relations of a :class:`CliffordSet`."""
    cs = cs or CliffordSet()
    eye4 = np.eye(4)
    out = {}
    s = cs.pauli
    out["pauli_cyclic"] = max(max_norm(s[i] @ s[(i + 1) % 3] - 1j * s[(i + 2) % 3]) for i in range(3))
    out["pauli_square"] = max(max_norm(x @ x - I2) for x in s)
    out["alpha_anticomm"] = max(
        max_norm(commutator(cs.alpha[i], cs.alpha[j], anti=True) - 2 * (i == j) * eye4)
        for i in range(3)
        for j in range(3)
    )
    out["alpha_beta"] = max(max_norm(commutator(x, cs.beta, anti=True)) for x in cs.alpha)
    out["beta_square"] = max_norm(cs.beta @ cs.beta - eye4)
    out["spin_algebra"] = max(
        max_norm(commutator(cs.spin[i], cs.spin[(i + 1) % 3]) - 1j * cs.hbar * cs.spin[(i + 2) % 3])
        for i in range(3)
    )
    return out


# --- eta representations --------------------------------------------------

ETA_CHOICES = {
    "I2": I2,
    "sigma1": SIGMA[0],
    "sigma3": SIGMA[2],
    "I4": np.eye(4, dtype=np.complex128),
    "sigma3_x_I2": np.kron(SIGMA[2], I2),
    "diag_1_1_1_-1": np.diag([1, 1, 1, -1]).astype(np.complex128),
}

#: Minkowski metric, signature (+, -, -, -).
METRIC = np.diag([1.0, -1.0, -1.0, -1.0])


@dataclass
class EtaRep:
    eta: np.ndarray
    n: int
    trace_label: float
    Q: tuple
    P: tuple
    basis: FockBasis3D


def build_eta_representation(eta_choice, n_cutoff=6, units=NATURAL, spacetime_components=4):
    """Spatial ``Q^i = eta (x) q^i`` and ``P^j = eta (x) p^j``.

    ``eta_choice`` is a key of :data:`ETA_CHOICES` or an explicit matrix.
    Time components act as scalars on stationary states and are not built.
    """
    if spacetime_components != 4:
        raise DomainError("only (3+1)-dimensional spacetime is supported")
    eta = ETA_CHOICES[eta_choice] if isinstance(eta_choice, str) else np.asarray(eta_choice, complex)
    n = eta.shape[0]
    if not hermitian_check(eta, 1e-14):
        raise DomainError("eta must be Hermitian")
    defect = max_norm(eta @ eta - np.eye(n))
    if defect > 1e-14:
        raise DomainError(f"eta must square to the identity (defect {defect:.3e})", defect=defect)
    basis = FockBasis3D(n_cutoff)
    ops = canonical_ops_3d(basis, units, spinor_dim=n)
    Q = tuple(kron(eta, qi) for qi in ops.q)
    P = tuple(kron(eta, pi) for pi in ops.p)
    return EtaRep(eta, n, abs(np.trace(eta).real), Q, P, basis)


def eta_bracket_residual(rep, units=NATURAL, buffer=2):
    """Interior max-norm of ``[P^i, Q^j] - i hbar g^{ij} (eta^2 (x) I)``."""
    idx = interior_indices(rep.basis, buffer, rep.n)
    eye_f = np.eye(rep.basis.size)
    unit = kron(rep.eta @ rep.eta, eye_f)
    worst = 0.0
    for i in range(3):
        for j in range(3):
            lhs = commutator(rep.P[i], rep.Q[j])
            target = 1j * units.hbar * METRIC[i + 1, j + 1] * unit
            worst = max(worst, max_norm((lhs - target)[np.ix_(idx, idx)]))
    return worst
