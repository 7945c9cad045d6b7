import warnings

import numpy as np
import pytest

from oscal import cornell
from oscal.cornell import BoxSizeWarning, NoBoundStateError, RadialProblem
from oscal.gauge import CornellMapping
from oscal.opkernel import DomainError, UnitSystem


def test_airy_oracle_against_scipy():
    special = pytest.importorskip("scipy.special")
    ours = cornell.airy_zeros(5)
    ref = -special.ai_zeros(5)[0]
    assert np.max(np.abs(np.array(ours) - ref)) < 1e-11
    for x in (-7.3, -2.0, 0.0, 1.5, 4.0):
        assert cornell.airy_ai(x) == pytest.approx(special.airy(x)[0], rel=1e-12, abs=1e-15)


def test_coulomb_oracle_scaling():
    lv = cornell.reference_oracles("coulomb", alpha=1.0, count=3)
    assert lv == pytest.approx([-0.5, -0.125, -1 / 18])
    lv2 = cornell.reference_oracles("coulomb", alpha=2.0, count=3)
    assert np.allclose(np.array(lv2), 4 * np.array(lv))
    assert cornell.reference_oracles("coulomb", alpha=1.0, l=1, count=1)[0] == pytest.approx(-0.125)


def test_oracle_errors():
    with pytest.raises(DomainError):
        cornell.reference_oracles("airy", k=1.0, l=1)
    with pytest.raises(NoBoundStateError):
        cornell.reference_oracles("coulomb", alpha=0.0)
    with pytest.raises(DomainError):
        cornell.reference_oracles("yukawa")


def test_problem_validation():
    with pytest.raises(NoBoundStateError):
        RadialProblem(0.0, 0.0)
    with pytest.raises(NoBoundStateError):
        RadialProblem(-1.0, 0.0)
    with pytest.raises(DomainError):
        RadialProblem(1.0, -1.0)
    with pytest.raises(DomainError):
        RadialProblem(1.0, 1.0, n=50)
    with pytest.raises(DomainError):
        RadialProblem(1.0, 1.0, l=0.5)
    with pytest.raises(DomainError):
        RadialProblem(1.0, 1.0, sigma3=0)
    with pytest.raises(DomainError):
        cornell.solve_radial(RadialProblem(1.0, 1.0), n_levels=0)
    # a repulsive Coulomb term is still bound by the linear wall
    assert cornell.solve_radial(RadialProblem(-1.0, 1.0, n=1000), 1).eigenvalues[0] > 0


def test_box_radius_rule():
    assert RadialProblem(1.0, 0.0).box_radius == pytest.approx(100.0)
    assert RadialProblem(0.0, 1.0).box_radius == pytest.approx(20.0)
    assert RadialProblem(1.0, 1.0).box_radius == pytest.approx(20.0)
    assert RadialProblem(1.0, 1.0, R=7.0).box_radius == 7.0


def test_coulomb_levels():
    res = cornell.solve_radial(RadialProblem(1.0, 0.0), 2)
    assert np.allclose(res.eigenvalues, [-0.5, -0.125], atol=1e-6)
    assert np.all(res.estimated_error < 1e-4)
    assert not res.box_warning


def test_airy_levels():
    res = cornell.solve_radial(RadialProblem(0.0, 1.0), 3)
    ref = cornell.reference_oracles("airy", k=1.0)
    assert np.allclose(res.eigenvalues, ref, atol=1e-6)
    assert np.all(np.abs(res.eigenvalues - ref) <= np.maximum(res.estimated_error * 10, 1e-8))


def test_odd_units_airy():
    u = UnitSystem(hbar=1.3, m0=2.0, omega=1.0, c=1.0)
    res = cornell.solve_radial(RadialProblem(0.0, 0.8, units=u), 2)
    assert np.allclose(res.eigenvalues, cornell.reference_oracles("airy", k=0.8, count=2, units=u), atol=1e-6)


def test_monotone_in_k_and_l():
    e0 = [cornell.solve_radial(RadialProblem(1.0, k, n=1500), 1).eigenvalues[0] for k in (0.5, 1.0, 2.0)]
    assert e0[0] < e0[1] < e0[2]
    el = [cornell.solve_radial(RadialProblem(1.0, 1.0, l=l, n=1500), 1).eigenvalues[0] for l in (0, 1, 2)]
    assert el[0] < el[1] < el[2]


def test_variational_bounds():
    # trial u = r exp(-r):  <T> = 1/2, <1/r> = 1, <r> = 3/2
    alpha, k = 1.0, 1.0
    e0 = cornell.solve_radial(RadialProblem(alpha, k, n=1500), 1).eigenvalues[0]
    assert e0 <= 0.5 - alpha + 1.5 * k
    assert e0 >= -0.5 * alpha**2
    assert e0 >= cornell.reference_oracles("airy", k=k, count=1)[0] - alpha * 10


def test_small_box_warns():
    with pytest.warns(BoxSizeWarning):
        res = cornell.solve_radial(RadialProblem(1.0, 0.0, R=5.0, n=500), 1)
    assert res.box_warning and res.tail_weights[0] > 1e-8


def test_no_warning_for_default_box():
    with warnings.catch_warnings():
        warnings.simplefilter("error", BoxSizeWarning)
        cornell.solve_radial(RadialProblem(1.0, 1.0, n=1000), 2)


def test_convergence_order():
    study = cornell.convergence_study(RadialProblem(0.0, 1.0), cornell.halving_grids(249, 4))
    assert study.monotone
    assert 1.8 <= study.order <= 2.2
    assert study.h[0] / study.h[1] == pytest.approx(2.0)


def test_convergence_order_against_reference():
    ref = cornell.reference_oracles("coulomb", alpha=1.0, count=1)[0]
    study = cornell.convergence_study(RadialProblem(1.0, 0.0), cornell.halving_grids(999, 3), reference=ref)
    assert 1.8 <= study.order <= 2.2


def test_convergence_grid_checks():
    p = RadialProblem(1.0, 1.0)
    with pytest.raises(DomainError):
        cornell.convergence_study(p, [200, 400])
    with pytest.raises(DomainError):
        cornell.convergence_study(p, [200, 400, 800])


def test_energy_map():
    m = cornell.map_energy([0.0, 1.5, -2.0], a3=0.0, branch="both")
    assert m.E_plus[0] == pytest.approx(1.0)
    assert m.E_plus[1] == pytest.approx(2.0)
    assert m.E_minus[1] == pytest.approx(-2.0)
    assert m.mappable == [True, True, False] and m.E_plus[2] is None
    assert cornell.map_energy([0.0], 0.0, "+").values() == m.E_plus[:1]
    assert cornell.map_energy([0.0], 0.0, "-").values() == [-1.0]
    with pytest.raises(DomainError):
        cornell.map_energy([0.0], 0.0, "up")


def test_energy_round_trip():
    u = UnitSystem(1.0, 1.7, 1.0, 2.5)
    for eps in (-0.5, 0.0, 3.2):
        E = cornell.energy_from_epsilon(eps, 0.4, u)
        assert cornell.epsilon_from_energy(E, 0.4, u) == pytest.approx(eps)
        assert cornell.epsilon_from_energy(-E, 0.4, u) == pytest.approx(eps)


def test_from_mapping_selects_branch():
    m = CornellMapping(epsilon=0.0, alpha=(0.9, 1.1), k=0.5)
    assert RadialProblem.from_mapping(m, sigma3=1).alpha == 0.9
    assert RadialProblem.from_mapping(m, sigma3=-1).alpha == 1.1


def test_spectrum_to_dict_is_plain():
    import json

    d = cornell.solve_radial(RadialProblem(1.0, 1.0, n=500), 2).to_dict()
    json.dumps(d, allow_nan=False)
