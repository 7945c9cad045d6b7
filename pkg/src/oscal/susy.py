"""Noncanonical oscillator pairs in (1+1)D and (3+1)D and their identity checks.

In (1+1)D the charges ``Q``, ``P`` live on ``C^2 (x) Fock(N)``; in (3+1)D on
``C^4 (x) Fock3D(Nmax)``. All identities are checked on the interior block,
away from the truncation shells.

Two (3+1)D Hamiltonians are kept side by side:

``H_DO``
    ``H_HO + (2 omega / hbar) beta S.L``, the Dirac-oscillator combination
    that appears in the deformed commutator ``[Q, P]``.
``H_SS``
    ``H_DO + (3/2) hbar omega beta``, which is what ``Q^2`` and ``P^2`` are
    proportional to, and therefore what ``Q`` and ``P`` commute with.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .fockrep import (
    SIGMA,
    CliffordSet,
    FockBasis1D,
    FockBasis3D,
    I2,
    canonical_ops_1d,
    canonical_ops_3d,
    interior_indices,
    interior_mask,
)
from .opkernel import (
    NATURAL,
    SizingError,
    VerificationReport,
    anticommutator,
    check_dim,
    cluster,
    commutator,
    eigh,
    eigvalsh,
    kron,
    max_norm,
)

MIN_CUTOFF_SUSY_1D = 8
MIN_QUANTA_SUSY_3D = 6


@dataclass
class SusyBundle1D:
    units: object
    basis: FockBasis1D
    Q: np.ndarray
    P: np.ndarray
    H_HO: np.ndarray
    H_SS: np.ndarray
    H_ZB: np.ndarray
    chi: np.ndarray
    spinor_dim: int = 2
    dimension: int = 1

    @property
    def q_squared_constant(self):
        u = self.units
        return u.c**2 / (u.hbar * u.omega**3)

    @property
    def p_squared_constant(self):
        u = self.units
        return u.hbar * u.omega / u.c**2


@dataclass
class SusyBundle3D:
    units: object
    basis: FockBasis3D
    Q: np.ndarray
    P: np.ndarray
    Qj: tuple
    Pj: tuple
    H_HO: np.ndarray
    H_DO: np.ndarray
    H_SS: np.ndarray
    chi: np.ndarray
    beta: np.ndarray
    spinor_dim: int = 4
    dimension: int = 3

    @property
    def q_squared_constant(self):
        u = self.units
        return u.c**2 / (3 * u.hbar * u.omega**3)

    @property
    def p_squared_constant(self):
        u = self.units
        return u.hbar * u.omega / (3 * u.c**2)


def build_susy_1d(n, units=NATURAL):
    if int(n) != n or n < MIN_CUTOFF_SUSY_1D:
        raise SizingError(f"cutoff must be an integer >= {MIN_CUTOFF_SUSY_1D}, got {n}")
    check_dim(2 * n)
    basis = FockBasis1D(int(n))
    q, p, h = canonical_ops_1d(basis.cutoff, units)
    hbar, m0, w, c = units.hbar, units.m0, units.omega, units.c
    s1, s2, s3 = SIGMA
    k = np.sqrt(1.0 / (2 * hbar * m0 * w))
    Q = (c / w) * k * (m0 * w * kron(s2, q) + kron(s1, p))
    P = (hbar * w / c) * k * (kron(s2, p) - m0 * w * kron(s1, q))
    eye = np.eye(basis.cutoff)
    H_HO = kron(I2, h)
    sz = kron(s3, eye)
    H_SS = H_HO + 0.5 * hbar * w * sz
    chi = (2.0 / (hbar * w)) * sz
    H_ZB = chi @ H_HO
    return SusyBundle1D(units, basis, Q, P, H_HO, H_SS, H_ZB, chi)


def build_susy_3d(n_max, units=NATURAL):
    if int(n_max) != n_max or n_max < MIN_QUANTA_SUSY_3D:
        raise SizingError(f"max_quanta must be an integer >= {MIN_QUANTA_SUSY_3D}, got {n_max}")
    basis = FockBasis3D(int(n_max))
    check_dim(4 * basis.size)
    ops = canonical_ops_3d(basis, units, spinor_dim=4)
    cs = CliffordSet(units.hbar)
    hbar, m0, w, c = units.hbar, units.m0, units.omega, units.c
    k = np.sqrt(1.0 / (6 * hbar * m0 * w))
    beta = cs.beta
    Qj = tuple(
        (c / w) * k * (m0 * w * kron(cs.alpha[j], ops.q[j]) + 1j * kron(beta @ cs.alpha[j], ops.p[j]))
        for j in range(3)
    )
    Pj = tuple(
        (hbar * w / c) * k * (kron(cs.alpha[j], ops.p[j]) - 1j * m0 * w * kron(beta @ cs.alpha[j], ops.q[j]))
        for j in range(3)
    )
    Q = sum(Qj)
    P = sum(Pj)
    eye_f = np.eye(basis.size)
    B = kron(beta, eye_f)
    H_HO = kron(np.eye(4), ops.h_ho)
    spin_orbit = sum(kron(beta @ cs.spin[i], ops.L[i]) for i in range(3))
    H_DO = H_HO + (2 * w / hbar) * spin_orbit
    H_SS = H_DO + 1.5 * hbar * w * B
    chi = (2.0 / (3 * hbar * w)) * B
    return SusyBundle3D(units, basis, Q, P, Qj, Pj, H_HO, H_DO, H_SS, chi, B)


# --- identity checks ------------------------------------------------------


def _interior(bundle, buffer):
    return interior_indices(bundle.basis, buffer, bundle.spinor_dim)


def _relative(defect, *terms, idx):
    """Interior max-norm of ``defect`` relative to the largest interior term."""
    ix = np.ix_(idx, idx)
    scale = max([1.0] + [max_norm(t[ix]) for t in terms])
    return max_norm(defect[ix]) / scale, scale


def _fit_constant(lhs, rhs, idx):
    ix = np.ix_(idx, idx)
    a, b = lhs[ix].ravel(), rhs[ix].ravel()
    return float(np.vdot(b, a).real / np.vdot(b, b).real)


def _report(identity_id, relation, residual, tol, notes="", **values):
    return VerificationReport(identity_id, relation, residual, tol, notes=notes, values=values)


def verify_identities_1d(bundle, buffer=2, tol=1e-10):
    """The seven (1+1)D operator identities, each as a :class:`VerificationReport`."""
    u = bundle.units
    hbar, w, c = u.hbar, u.omega, u.c
    idx = _interior(bundle, buffer)
    Q, P, H_HO, H_SS = bundle.Q, bundle.P, bundle.H_HO, bundle.H_SS
    eye = np.eye(Q.shape[0])
    sz = bundle.chi * (hbar * w / 2.0)
    reports = []

    qp = commutator(Q, P)
    deformed = 1j * hbar * (eye + bundle.chi @ H_HO)
    susy_form = (2j / w) * sz @ H_SS
    r_a, s_a = _relative(qp - deformed, qp, deformed, idx=idx)
    r_b, _ = _relative(qp - susy_form, qp, susy_form, idx=idx)
    r_printed, _ = _relative(qp + susy_form, qp, susy_form, idx=idx)
    reports.append(
        _report(
            "qp_commutator",
            "[Q,P] = i hbar (I + chi H_HO) = (2i sigma3/omega) H_SS",
            max(r_a, r_b),
            tol,
            "the form -(2i sigma3/omega) H_SS has the wrong sign: QP = +(i sigma3/omega) H_SS",
            scale=s_a,
            wrong_sign_residual=r_printed,
        )
    )

    anti = anticommutator(Q, P)
    reports.append(_report("qp_anticommutator", "{Q,P} = 0", _relative(anti, idx=idx)[0], tol))

    q2 = Q @ Q
    kappa = _fit_constant(q2, H_SS, idx)
    r, s = _relative(q2 - kappa * H_SS, q2, idx=idx)
    expected = bundle.q_squared_constant
    reports.append(
        _report(
            "q_squared",
            "Q^2 = kappa H_SS",
            r,
            tol,
            "fitted kappa matches c^2/(hbar omega^3); the printed prefactor c/(hbar omega^3) is dimensionally inconsistent",
            kappa_fit=kappa,
            kappa_derived=expected,
            kappa_printed=c / (hbar * w**3),
            kappa_rel_error=abs(kappa - expected) / expected,
        )
    )

    p2 = P @ P
    target = bundle.p_squared_constant * H_SS
    reports.append(
        _report("p_squared", "P^2 = (hbar omega/c^2) H_SS", _relative(p2 - target, p2, target, idx=idx)[0], tol)
    )

    hq = commutator(H_SS, Q)
    hp = commutator(H_SS, P)
    r = max(_relative(hq, H_SS @ Q, idx=idx)[0], _relative(hp, H_SS @ P, idx=idx)[0])
    reports.append(_report("h_ss_conserved", "[H_SS,Q] = [H_SS,P] = 0", r, tol))

    lhs = commutator(H_HO, Q)
    rhs = -1j * (c**2 / w) * P
    reports.append(
        _report("h_ho_q", "[H_HO,Q] = -i (c^2/omega) P", _relative(lhs - rhs, lhs, rhs, idx=idx)[0], tol)
    )

    lhs = commutator(H_HO, P)
    rhs = 1j * w * (hbar * w / c) ** 2 * Q
    reports.append(
        _report(
            "h_ho_p", "[H_HO,P] = i omega (hbar omega/c)^2 Q", _relative(lhs - rhs, lhs, rhs, idx=idx)[0], tol
        )
    )
    return reports


def verify_identities_3d(bundle, buffer=2, tol=1e-10):
    """The (3+1)D identities, including the componentwise oscillator relations."""
    u = bundle.units
    hbar, w, c = u.hbar, u.omega, u.c
    idx = _interior(bundle, buffer)
    Q, P = bundle.Q, bundle.P
    H_HO, H_DO, H_SS = bundle.H_HO, bundle.H_DO, bundle.H_SS
    eye = np.eye(Q.shape[0])
    reports = []

    qp = commutator(Q, P)
    deformed = 1j * hbar * (eye + bundle.chi @ H_DO)
    r, s = _relative(qp - deformed, qp, deformed, idx=idx)
    susy_form = (2j / (3 * w)) * bundle.beta @ H_SS
    reports.append(
        _report(
            "qp_commutator",
            "[Q,P] = i hbar (I + (2 beta/3 hbar omega) H_DO)",
            r,
            tol,
            "equivalently (2i beta/3 omega) H_SS, since H_SS = H_DO + (3/2) hbar omega beta",
            scale=s,
            susy_form_residual=_relative(qp - susy_form, qp, susy_form, idx=idx)[0],
        )
    )

    anti = anticommutator(Q, P)
    reports.append(_report("qp_anticommutator", "{Q,P} = 0", _relative(anti, idx=idx)[0], tol))

    q2 = Q @ Q
    kappa = _fit_constant(q2, H_SS, idx)
    r, _ = _relative(q2 - kappa * H_SS, q2, idx=idx)
    kappa_do = _fit_constant(q2, H_DO, idx)
    r_do, _ = _relative(q2 - kappa_do * H_DO, q2, idx=idx)
    expected = bundle.q_squared_constant
    reports.append(
        _report(
            "q_squared",
            "Q^2 = kappa H_SS",
            r,
            tol,
            "fitted kappa matches c^2/(3 hbar omega^3), printed as c/(3 hbar omega^3); "
            "Q^2 is not proportional to H_DO (the (3/2) hbar omega beta term is required)",
            kappa_fit=kappa,
            kappa_derived=expected,
            kappa_printed=c / (3 * hbar * w**3),
            kappa_rel_error=abs(kappa - expected) / expected,
            h_do_fit_residual=r_do,
        )
    )

    p2 = P @ P
    target = bundle.p_squared_constant * H_SS
    reports.append(
        _report(
            "p_squared", "P^2 = (hbar omega/3c^2) H_SS", _relative(p2 - target, p2, target, idx=idx)[0], tol
        )
    )

    r = max(
        _relative(commutator(H_SS, Q), H_SS @ Q, idx=idx)[0],
        _relative(commutator(H_SS, P), H_SS @ P, idx=idx)[0],
    )
    r_do = max(
        _relative(commutator(H_DO, Q), H_DO @ Q, idx=idx)[0],
        _relative(commutator(H_DO, P), H_DO @ P, idx=idx)[0],
    )
    reports.append(
        _report(
            "h_ss_conserved",
            "[H_SS,Q] = [H_SS,P] = 0",
            r,
            tol,
            "H_DO does not commute with Q or P",
            h_do_residual=r_do,
        )
    )

    worst_q = worst_p = 0.0
    for qj, pj in zip(bundle.Qj, bundle.Pj):
        lhs = commutator(H_HO, qj)
        rhs = -1j * (c**2 / w) * pj
        worst_q = max(worst_q, _relative(lhs - rhs, lhs, rhs, idx=idx)[0])
        lhs = commutator(H_HO, pj)
        rhs = 1j * w * (hbar * w / c) ** 2 * qj
        worst_p = max(worst_p, _relative(lhs - rhs, lhs, rhs, idx=idx)[0])
    reports.append(_report("h_ho_qj", "[H_HO,Q^j] = -i (c^2/omega) P^j", worst_q, tol))
    reports.append(_report("h_ho_pj", "[H_HO,P^j] = i omega (hbar omega/c)^2 Q^j", worst_p, tol))
    return reports


# --- spectra and pairing --------------------------------------------------


@dataclass
class PairingEntry:
    energy: float
    multiplicity: int
    reliability_weight: float
    pairing_residual: float


@dataclass
class PairingReport:
    entries: list
    zero_modes: list
    unreliable_levels: int
    max_pairing_residual: float
    all_positive_even: bool
    min_reliable_eigenvalue: float
    eigen_residual: float
    notes: str = ""

    def to_dict(self):
        return {
            "entries": [vars(e).copy() for e in self.entries],
            "zero_modes": [vars(e).copy() for e in self.zero_modes],
            "unreliable_levels": self.unreliable_levels,
            "max_pairing_residual": self.max_pairing_residual,
            "all_positive_even": self.all_positive_even,
            "min_reliable_eigenvalue": self.min_reliable_eigenvalue,
            "eigen_residual": self.eigen_residual,
            "notes": self.notes,
        }


def _reliable_levels(bundle, buffer, reliability_threshold, cluster_gap, zero_tol):
    """Diagonalise ``H_SS`` and split each degenerate cluster into reliable parts.

    A state is reliable when both it and its image under ``Q`` carry at most
    ``reliability_threshold`` of their weight on the top ``buffer`` shells.
    Within a cluster the reliable subspace is found by diagonalising that
    combined weight, so the result does not depend on how the eigensolver
    happened to mix degenerate vectors.
    """
    u = bundle.units
    scale = u.hbar * u.omega
    dec = eigh(bundle.H_SS)
    top = ~np.tile(interior_mask(bundle.basis, buffer), bundle.spinor_dim)
    kappa = bundle.q_squared_constant
    levels = []
    for members in cluster(dec.eigenvalues, cluster_gap * scale):
        vc = dec.eigenvectors[:, members]
        energy = float(np.mean(dec.eigenvalues[members]))
        positive = energy > zero_tol * scale
        weight = vc[top].conj().T @ vc[top]
        qv = bundle.Q @ vc
        if positive:
            weight = weight + (qv[top].conj().T @ qv[top]) / (kappa * energy)
        w, rot = np.linalg.eigh(0.5 * (weight + weight.conj().T))
        keep = w <= reliability_threshold
        levels.append((energy, positive, vc @ rot[:, keep], [float(x) for x in w[keep]], len(members)))
    return dec, levels


def susy_pairing_check(bundle, buffer=2, reliability_threshold=1e-8, cluster_gap=1e-8, zero_tol=1e-8):
    """Check that ``Q`` maps each reliable positive-energy eigenspace into itself."""
    dec, levels = _reliable_levels(bundle, buffer, reliability_threshold, cluster_gap, zero_tol)
    entries, zero_modes = [], []
    unreliable = 0
    for energy, positive, vecs, weights, _ in levels:
        if vecs.shape[1] == 0:
            unreliable += 1
            continue
        qv = bundle.Q @ vecs
        if positive:
            res = np.linalg.norm(bundle.H_SS @ qv - energy * qv, axis=0) / np.linalg.norm(qv, axis=0)
        else:
            # zero modes are annihilated by Q
            res = np.linalg.norm(qv, axis=0)
        entry = PairingEntry(energy, vecs.shape[1], float(np.clip(max(weights), 0.0, 1.0)), float(res.max()))
        (entries if positive else zero_modes).append(entry)
    all_even = all(e.multiplicity % 2 == 0 for e in entries)
    reliable = entries + zero_modes
    return PairingReport(
        entries=entries,
        zero_modes=zero_modes,
        unreliable_levels=unreliable,
        max_pairing_residual=max((e.pairing_residual for e in entries), default=0.0),
        all_positive_even=all_even,
        min_reliable_eigenvalue=min((e.energy for e in reliable), default=float("nan")),
        eigen_residual=dec.residual,
    )


@dataclass
class OperatorSpectrum:
    eigenvalues: np.ndarray
    multiplicities: list
    reliable: list
    symmetry_residual: float | None = None
    commutes_with_chi: float | None = None
    notes: str = ""
    levels: list = field(default_factory=list)

    def rows(self):
        return [
            {"index": i, "eigenvalue": float(ev), "multiplicity": int(m), "reliable": bool(r)}
            for i, (ev, m, r) in enumerate(zip(self.eigenvalues, self.multiplicities, self.reliable))
        ]


def interior_spectrum(op, basis, buffer=2, spinor_dim=1):
    """Eigenvalues of the interior block of ``op``, ascending."""
    idx = interior_indices(basis, buffer, spinor_dim)
    return eigvalsh(op[np.ix_(idx, idx)])


def _levels(values, gap):
    groups = cluster(values, gap)
    return np.array([float(np.mean(values[g])) for g in groups]), [len(g) for g in groups]


def susy_spectrum(bundle, buffer=2, reliability_threshold=1e-8, cluster_gap=1e-8):
    """Levels of ``H_SS`` with reliable multiplicities (unreliable levels flagged)."""
    _, levels = _reliable_levels(bundle, buffer, reliability_threshold, cluster_gap, 1e-8)
    values, mult, rel = [], [], []
    for energy, _, vecs, _, size in levels:
        values.append(energy)
        mult.append(vecs.shape[1] if vecs.shape[1] else size)
        rel.append(bool(vecs.shape[1]))
    return OperatorSpectrum(np.array(values), mult, rel)


def zb_spectrum(bundle, buffer=2, gap=1e-8):
    """Interior spectrum of ``H_ZB = chi H_HO`` with its negation-symmetry defect."""
    values = interior_spectrum(bundle.H_ZB, bundle.basis, buffer, bundle.spinor_dim)
    levels, mult = _levels(values, gap)
    symmetry = float(np.max(np.abs(values + values[::-1]))) if values.size else 0.0
    comm = max_norm(commutator(bundle.H_ZB, bundle.chi))
    return OperatorSpectrum(levels, mult, [True] * len(levels), symmetry_residual=symmetry, commutes_with_chi=comm)
