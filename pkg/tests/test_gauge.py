import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oscal import gauge
from oscal.fockrep import SIGMA
from oscal.symbolic import (
    FamilyClosureError,
    MatrixDifferentialOperator,
    SymbolicFunction,
    Spinor,
    central_difference,
)

S1, S2, S3 = SIGMA


@pytest.fixture(scope="module")
def probes():
    return gauge.ProbeSet.random(42)


def test_probe_set(probes):
    r = np.linalg.norm(probes.points, axis=1)
    assert r.min() >= 0.4 and r.max() <= 3.0
    assert len(probes.functions) == 5 and probes.points.shape == (20, 3)
    again = gauge.ProbeSet.random(42)
    assert np.array_equal(again.points, probes.points)


@settings(max_examples=20, deadline=None)
@given(
    exps=st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(0, 2)),
    p=st.sampled_from([-1.5, -0.5, 0, 0.5, 1]),
    lam=st.floats(0.3, 1.5),
    axis=st.integers(0, 2),
)
def test_derivative_matches_differences(exps, p, lam, axis):
    f = SymbolicFunction.term(1.0 - 0.5j, exps, p, lam, (0.3, -0.2, 0.5))
    pts = np.array([[0.7, 0.4, -0.9], [1.1, -0.6, 0.8], [-0.5, 0.9, 0.6]])
    exact = f.diff(axis)(pts)
    numeric = central_difference(f, pts, axis, 1e-3)
    assert np.max(np.abs(exact - numeric)) <= 1e-8 * max(1.0, np.max(np.abs(exact)))


def test_family_closure():
    g = SymbolicFunction.gaussian(1.0, (0, 0, 0))
    with pytest.raises(FamilyClosureError):
        g * g
    with pytest.raises(FamilyClosureError):
        MatrixDifferentialOperator(potential=[(S1, g)])
    # derivatives and exact cancellation stay in the family
    h = SymbolicFunction.radial(0.5) * g
    assert isinstance(h.diff(0).diff(1), SymbolicFunction)
    assert (h - h).is_zero()


def test_potential_square_is_hermitian():
    ops = gauge.build_pi_operators(1.3, 0.7, 0.2, 0.0)
    v_sq = lambda f: ops.A0(ops.A0(f))
    pts = np.array([[0.5, 0.3, 0.9], [1.5, -1.0, 0.2]])
    r = np.linalg.norm(pts, axis=1)
    for k in range(2):
        got = v_sq(Spinor.basis(k))(pts)
        assert np.allclose(got[k], -(1.3**2) / r + 0.7**2 * r)
        assert np.allclose(got[1 - k], 0)
    # the potential part itself is not Hermitian when a1 != 0
    m = sum(mat for mat, _ in ops.A0.potential)
    assert np.abs(m - m.conj().T).max() > 0


def test_free_case():
    ops = gauge.build_pi_operators(0, 0, 0, 1.0)
    for k, pk in enumerate(ops.Pi):
        terms = [(i, m) for i, m, s in pk.derivs]
        assert terms and all(np.allclose(m, 1j * S1) and i == k for i, m in terms)
        assert all(np.allclose(m, 0) for m, _ in pk.potential)


def test_finite_difference_oracle(probes):
    ops = gauge.build_pi_operators(1, 1, 0.2, 1.5)
    rep = gauge.fd_cross_check(ops, probes)
    assert rep.passed and rep.residual <= 1e-8


def test_field_strengths(probes):
    reports = {r.identity_id: r for r in gauge.check_field_strengths(1, 1, 0.2, probes, E=1.5)}
    spatial = reports["spatial_field_strength"]
    assert spatial.passed
    assert spatial.fitted["c"] == pytest.approx(-0.4j, abs=1e-12)
    assert spatial.fitted["c"] / spatial.fitted["c_printed"] == pytest.approx(2.0)
    assert reports["potential_commutator"].passed and reports["potential_commutator"].residual <= 1e-10
    assert reports["spatial_potentials_commute"].residual == 0.0
    mixed = reports["mixed_field_strength"]
    assert mixed.passed
    assert mixed.values["derivative_part_relative_size"] > 0.1
    assert mixed.values["printed_form_deviation"] > 0.1


def test_no_derivative_remainder_without_a1_a2(probes):
    mixed = {r.identity_id: r for r in gauge.check_field_strengths(0, 0, 0.3, probes)}["mixed_field_strength"]
    assert mixed.values["derivative_part_relative_size"] < 1e-14


@pytest.mark.parametrize("a", [(0, 0, 0), (1, 1, 0.2), (0.3, 2.0, -0.7)])
def test_kge_reduction(probes, a):
    rep = gauge.check_kge_reduction(*a, 1.5, probes)
    assert rep.passed and rep.residual <= 1e-8
    derived = gauge.derived_cornell_mapping(*a, 1.5)
    assert rep.fitted["extracted"]["k"] == pytest.approx(derived.k, abs=1e-10)
    assert abs(derived.k) == pytest.approx(a[1] ** 2 / 2)


def test_kge_e_independent(probes):
    res = [gauge.check_kge_reduction(1, 1, 0.2, E, probes).values["operator_residual"] for E in (0, 1, 10)]
    assert max(res) - min(res) <= 1e-12


def test_kge_free_epsilon(probes):
    rep = gauge.check_kge_reduction(0, 0, 0, 2.0, probes)
    assert rep.fitted["derived"]["epsilon"] == pytest.approx((4.0 - 1.0) / 2)


def test_kge_odd_units(probes):
    from conftest import ODD_UNITS

    rep = gauge.check_kge_reduction(0.8, 0.6, 0.3, 5.0, probes, ODD_UNITS)
    assert rep.passed


def test_deterministic_reports():
    a = gauge.check_kge_reduction(1, 1, 0.2, 1.5, gauge.ProbeSet.random(7)).to_dict()
    b = gauge.check_kge_reduction(1, 1, 0.2, 1.5, gauge.ProbeSet.random(7)).to_dict()
    assert a == b
