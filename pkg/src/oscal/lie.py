"""Structure-constant engine for the Hamiltonian-deformed oscillator algebra.

Generators, dimensionless: ``q1..q3``, ``p1..p3``, ``J1..J3``, ``H`` and a
central unit ``C``. Brackets are ``[X_a, X_b] = i sum_c f[a, b, c] X_c`` with

    [q_i, p_j] = i delta_ij (C + chi H)
    [H, q_j] = -i p_j          [H, p_j] = i q_j
    [q_i, q_j] = [p_i, p_j] = -i chi eps_ijk J_k
    [J_i, X_j] = i eps_ijk X_k  for X in {q, p, J}
    [H, J_k] = 0

``chi < 0`` gives a compact (so(5)-type) algebra, ``chi > 0`` a
noncompact (so(3,2)-type) one and ``chi = 0`` the oscillator
(Newton-Hooke) algebra with a nontrivial center.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
import sympy as sp

from .opkernel import DomainError, VerificationReport

GENERATORS = ("q1", "q2", "q3", "p1", "p2", "p3", "J1", "J2", "J3", "H", "C")
INDEX = {name: i for i, name in enumerate(GENERATORS)}
DIM = len(GENERATORS)

_Q = (0, 1, 2)
_P = (3, 4, 5)
_J = (6, 7, 8)
_H = 9
_C = 10


def _levi_civita():
    eps = np.zeros((3, 3, 3))
    for i, j, k in itertools.permutations(range(3)):
        eps[i, j, k] = np.linalg.det(np.eye(3)[[i, j, k]])
    return np.rint(eps)


EPS = _levi_civita()


@dataclass
class StructureTensor:
    chi: float
    f: np.ndarray

    def bracket(self, a, b):
        """Coefficient vector of ``-i [X_a, X_b]``."""
        return self.f[_idx(a), _idx(b)]

    def perturbed(self, a, b, c, delta):
        """Copy with ``f[a, b, c]`` shifted by ``delta`` (antisymmetry kept)."""
        f = self.f.copy()
        a, b, c = _idx(a), _idx(b), _idx(c)
        f[a, b, c] += delta
        f[b, a, c] -= delta
        return StructureTensor(self.chi, f)


def _idx(x):
    return INDEX[x] if isinstance(x, str) else int(x)


def structure_tensor(chi):
    chi = float(chi)
    if not np.isfinite(chi):
        raise DomainError(f"chi must be finite, got {chi}")
    f = np.zeros((DIM, DIM, DIM))

    def put(a, b, c, v):
        f[a, b, c] += v
        f[b, a, c] -= v

    for i in range(3):
        put(_Q[i], _P[i], _C, 1.0)
        put(_Q[i], _P[i], _H, chi)
        put(_H, _Q[i], _P[i], -1.0)
        put(_H, _P[i], _Q[i], 1.0)
    for i, j in itertools.combinations(range(3), 2):
        for k in range(3):
            e = EPS[i, j, k]
            if e:
                put(_Q[i], _Q[j], _J[k], -chi * e)
                put(_P[i], _P[j], _J[k], -chi * e)
    for i in range(3):
        for j in range(3):
            for k in range(3):
                e = EPS[i, j, k]
                if not e:
                    continue
                if i < j:
                    put(_J[i], _J[j], _J[k], e)
                if i != j:
                    put(_J[i], _Q[j], _Q[k], e)
                    put(_J[i], _P[j], _P[k], e)
    return StructureTensor(chi, f)


def jacobi_tensor(t):
    """``sum_e f_abe f_ecd + f_bce f_ead + f_cae f_ebd`` for every (a, b, c, d)."""
    f = t.f
    return (
        np.einsum("abe,ecd->abcd", f, f)
        + np.einsum("bce,ead->abcd", f, f)
        + np.einsum("cae,ebd->abcd", f, f)
    )


def jacobi_residual(t):
    return float(np.max(np.abs(jacobi_tensor(t))))


def adjoint(t):
    """``ad[a][c, b] = f[a, b, c]``."""
    return np.transpose(t.f, (0, 2, 1))


@dataclass
class KillingReport:
    killing_matrix: np.ndarray
    eigenvalues: np.ndarray
    signature: tuple
    classification: str
    chi: float

    def to_dict(self):
        return {
            "chi": self.chi,
            "killing_matrix": self.killing_matrix.tolist(),
            "eigenvalues": self.eigenvalues.tolist(),
            "signature": list(self.signature),
            "classification": self.classification,
        }


def killing_matrix(t):
    ad = adjoint(t)
    return np.einsum("acb,dbc->ad", ad, ad)


def killing_form(t, zero_tol=1e-9, jacobi_tol=0.0):
    """Killing matrix, its signature and the resulting algebra type."""
    res = jacobi_residual(t)
    if res > jacobi_tol:
        raise DomainError(f"bracket table violates the Jacobi identity (residual {res:.3e})", defect=res)
    k = killing_matrix(t)
    k = 0.5 * (k + k.T)
    w = np.linalg.eigvalsh(k)
    cut = zero_tol * max(1.0, float(np.max(np.abs(w))))
    n_pos = int(np.sum(w > cut))
    n_neg = int(np.sum(w < -cut))
    n_zero = DIM - n_pos - n_neg
    if n_zero > 1:
        label = "Newton-Hooke"
    elif n_pos == 0:
        label = "so(5)"
    elif n_neg and n_zero == 1:
        label = "so(3,2)"
    else:
        label = "unclassified"
    return KillingReport(k, w, (n_pos, n_neg, n_zero), label, t.chi)


def killing_invariance_residual(t):
    """Max of ``|K([x,y],z) + K(y,[x,z])|`` over basis triples."""
    k = killing_matrix(t)
    f = t.f
    # K([x_a, x_b], x_c) = sum_e f_abe K_ec, up to the common factor i
    lhs = np.einsum("abe,ec->abc", f, k)
    return float(np.max(np.abs(lhs + np.transpose(lhs, (0, 2, 1)))))


def centralizer_dimension(t, elements=("H", "J3"), tol=1e-10):
    """Dimension of ``{x : [x, y] = 0 for y in elements}`` in the generator span."""
    rows = [t.f[:, _idx(y), :].T for y in elements]
    m = np.vstack(rows)
    return DIM - int(np.linalg.matrix_rank(m, tol=tol))


def conserved_rotations_check(t, tol=1e-14):
    residual = max(float(np.max(np.abs(t.f[_H, _J[k]]))) for k in range(3))
    return VerificationReport(
        "rotations_conserved", "[H, J_k] = 0", residual, tol, values={"chi": t.chi}
    )


# --- symbolic rederivation of the q-q and p-p constants --------------------


@dataclass
class StructureCoefficients:
    zeta: sp.Expr
    xi: sp.Expr
    zeta_dimensionless: sp.Expr
    xi_dimensionless: sp.Expr
    zeta_printed: sp.Expr
    xi_printed_relation: sp.Expr
    equations: list

    def evaluate(self, chi, m0=1.0, omega=1.0):
        subs = {CHI: chi, M0: m0, OMEGA: omega}
        return {
            "zeta": float(self.zeta.subs(subs)),
            "xi": float(self.xi.subs(subs)),
            "zeta_printed": float(self.zeta_printed.subs(subs)),
            "xi_from_printed_relation": float(self.xi_printed_relation.subs(subs)),
        }


CHI, M0, OMEGA, HBAR = sp.symbols("chi m0 omega hbar", real=True)
ZETA, XI = sp.symbols("zeta xi", real=True)


def _dimensionful_table(zeta, xi):
    """``[X_a, X_b]`` as sympy coefficient dicts, with the identity ``I`` central."""
    names = [f"q{i}" for i in range(3)] + [f"p{i}" for i in range(3)] + [f"J{i}" for i in range(3)] + ["H", "I"]
    table = {}

    def put(a, b, coeffs):
        table[(a, b)] = coeffs
        table[(b, a)] = {k: -v for k, v in coeffs.items()}

    i_ = sp.I
    for i in range(3):
        for j in range(3):
            if i == j:
                put(f"q{i}", f"p{j}", {"I": i_ * HBAR, "H": i_ * CHI / OMEGA})
            else:
                put(f"q{i}", f"p{j}", {})
        put("H", f"q{i}", {f"p{i}": -i_ * HBAR / M0})
        put("H", f"p{i}", {f"q{i}": i_ * HBAR * M0 * OMEGA**2})
        put("H", f"J{i}", {})
    for i, j in itertools.combinations(range(3), 2):
        k = 3 - i - j
        e = int(EPS[i, j, k])
        put(f"q{i}", f"q{j}", {f"J{k}": i_ * zeta * e})
        put(f"p{i}", f"p{j}", {f"J{k}": i_ * xi * e})
        put(f"J{i}", f"J{j}", {f"J{k}": i_ * HBAR * e})
    for i in range(3):
        for j in range(3):
            if i == j:
                put(f"J{i}", f"q{j}", {})
                put(f"J{i}", f"p{j}", {})
                continue
            k = 3 - i - j
            e = int(EPS[i, j, k])
            put(f"J{i}", f"q{j}", {f"q{k}": i_ * HBAR * e})
            put(f"J{i}", f"p{j}", {f"p{k}": i_ * HBAR * e})
    return names, table


def _bracket(table, x, y):
    out = {}
    for a, ca in x.items():
        for b, cb in y.items():
            if a == b or a == "I" or b == "I":
                continue
            for c, v in table[(a, b)].items():
                out[c] = out.get(c, 0) + ca * cb * v
    return out


def _jacobi(table, a, b, c):
    ga, gb, gc = {a: 1}, {b: 1}, {c: 1}
    total = {}
    for x, y, z in ((ga, gb, gc), (gb, gc, ga), (gc, ga, gb)):
        for k, v in _bracket(table, _bracket(table, x, y), z).items():
            total[k] = total.get(k, 0) + v
    return [sp.expand(v) for v in total.values()]


def derive_structure_coefficients():
    """Solve the Jacobi identities of the (q, q, p) and (p, p, q) triads for zeta, xi.

    With ``[q_i, q_j] = i zeta eps_ijk J_k`` and ``[p_i, p_j] = i xi eps_ijk J_k``
    in dimensionful form, the identities are linear in the unknowns.
    """
    _, table = _dimensionful_table(ZETA, XI)
    equations = set()
    for l, m, i in itertools.product(range(3), repeat=3):
        if l == m:
            continue
        equations.update(_jacobi(table, f"q{l}", f"q{m}", f"p{i}"))
        equations.update(_jacobi(table, f"p{l}", f"p{m}", f"q{i}"))
    equations = sorted((e for e in equations if e != 0), key=sp.default_sort_key)
    sol = sp.solve(equations, [ZETA, XI], dict=True)
    if len(sol) != 1:
        raise DomainError(f"expected a unique solution for zeta, xi, got {sol}")
    zeta = sp.simplify(sol[0][ZETA])
    xi = sp.simplify(sol[0][XI])
    # dimensionless scalings: q ~ sqrt(hbar/m0 omega), p ~ sqrt(hbar m0 omega), J ~ hbar
    zeta_dl = sp.simplify(zeta * HBAR / (HBAR / (M0 * OMEGA)))
    xi_dl = sp.simplify(xi * HBAR / (HBAR * M0 * OMEGA))
    zeta_printed = -CHI / OMEGA
    return StructureCoefficients(
        zeta=zeta,
        xi=xi,
        zeta_dimensionless=zeta_dl,
        xi_dimensionless=xi_dl,
        zeta_printed=zeta_printed,
        xi_printed_relation=M0 * OMEGA**2 * zeta_printed,
        equations=equations,
    )
