"""Acceptance gate: one recorded pass/fail line per criterion."""
import json
import time
import warnings

import numpy as np
import pytest
import sympy as sp

from oscal import cli, cornell, gauge, lie, susy
from oscal.fockrep import build_eta_representation, eta_bracket_residual


def _by_id(reports):
    return {r.identity_id: r for r in reports}


def test_criterion_1_susy_1d_identities(acceptance):
    t0 = time.perf_counter()
    bundle = susy.build_susy_1d(32)
    reps = _by_id(susy.verify_identities_1d(bundle, buffer=2, tol=1e-10))
    elapsed = time.perf_counter() - t0
    kappa = reps["q_squared"].values["kappa_fit"]
    ok = (
        len(reps) == 7
        and all(r.passed for r in reps.values())
        and reps["qp_anticommutator"].residual == 0.0
        and abs(kappa - 1.0) <= 1e-10
        and elapsed < 1.0
    )
    worst = max(r.residual for r in reps.values())
    acceptance(1, ok, f"7 identities, worst residual {worst:.1e}, kappa {kappa:.12f}, {elapsed:.2f}s")
    assert ok


def test_criterion_2_1d_spectra(acceptance):
    bundle = susy.build_susy_1d(32)
    spec = susy.susy_spectrum(bundle, 2)
    flat = np.repeat(
        [lv for lv, r in zip(spec.eigenvalues, spec.reliable) if r],
        [m for m, r in zip(spec.multiplicities, spec.reliable) if r],
    )
    ss_err = float(np.max(np.abs(flat[:9] - [0, 1, 1, 2, 2, 3, 3, 4, 4])))
    zb = susy.zb_spectrum(bundle, 2)
    odd = float(np.max(np.abs(np.abs(zb.eigenvalues) - (2 * np.round((np.abs(zb.eigenvalues) - 1) / 2) + 1))))
    pos = zb.eigenvalues[zb.eigenvalues > 0]
    ok = (
        flat.size >= 9
        and ss_err <= 1e-8
        and zb.symmetry_residual <= 1e-8
        and odd <= 1e-8
        and np.allclose(pos[:3], [1, 3, 5], atol=1e-8)
    )
    acceptance(2, ok, f"H_SS level error {ss_err:.1e}, H_ZB symmetry {zb.symmetry_residual:.1e}")
    assert ok


@pytest.mark.slow
def test_criterion_3_susy_3d(acceptance):
    t0 = time.perf_counter()
    bundle = susy.build_susy_3d(10)
    dim = bundle.Q.shape[0] // 4
    reps = _by_id(susy.verify_identities_3d(bundle, buffer=2, tol=1e-10))
    pairing = susy.susy_pairing_check(bundle, 2)
    elapsed = time.perf_counter() - t0
    ok = (
        dim == 286
        and reps["qp_commutator"].passed
        and reps["qp_anticommutator"].passed
        and pairing.min_reliable_eigenvalue >= -1e-10
        and pairing.all_positive_even
        and pairing.max_pairing_residual <= 1e-8
        and elapsed < 60.0
    )
    acceptance(
        3,
        ok,
        f"dim {4 * dim}, [Q,P] {reps['qp_commutator'].residual:.1e}, pairing {pairing.max_pairing_residual:.1e}, "
        f"min level {pairing.min_reliable_eigenvalue:.1e}, {elapsed:.1f}s",
    )
    assert ok


def test_criterion_4_lie_algebra(acceptance):
    t0 = time.perf_counter()
    chis = (-2, -1, -0.5, 0, 0.5, 1, 2)
    jac = max(lie.jacobi_residual(lie.structure_tensor(c)) for c in chis)
    labels = {}
    for c in chis:
        k = lie.killing_form(lie.structure_tensor(c))
        nonzero = k.eigenvalues[np.abs(k.eigenvalues) > 1e-9]
        if c < 0:
            good = k.classification == "so(5)" and np.all(nonzero < 0)
        elif c > 0:
            good = k.classification == "so(3,2)" and k.signature[:2] == (6, 4)
        else:
            good = k.classification == "Newton-Hooke" and k.signature[2] >= 2
        labels[c] = good
    coeffs = lie.derive_structure_coefficients()
    xi_ok = sp.simplify(coeffs.xi + lie.CHI * lie.M0 * lie.OMEGA) == 0
    zeta_ok = sp.simplify(coeffs.zeta + lie.CHI / (lie.M0 * lie.OMEGA)) == 0
    discrepancy = sp.simplify(coeffs.zeta - coeffs.zeta_printed) != 0
    elapsed = time.perf_counter() - t0
    ok = jac == 0.0 and all(labels.values()) and xi_ok and zeta_ok and discrepancy and elapsed < 1.0
    acceptance(4, ok, f"Jacobi {jac}, labels ok {all(labels.values())}, xi={coeffs.xi}, zeta={coeffs.zeta}, {elapsed:.2f}s")
    assert ok


def test_criterion_5_eta_representations(acceptance):
    t0 = time.perf_counter()
    res, labels = {}, []
    for name in ("I2", "sigma1", "sigma3"):
        rep = build_eta_representation(name)
        res[name] = eta_bracket_residual(rep)
        labels.append(float(rep.trace_label))
    elapsed = time.perf_counter() - t0
    ok = max(res.values()) <= 1e-12 and labels == [2, 0, 0] and elapsed < 1.0
    acceptance(5, ok, f"worst residual {max(res.values()):.1e}, labels {tuple(labels)}, {elapsed:.2f}s")
    assert ok


def test_criterion_6_gauge_engine(acceptance, tmp_path):
    t0 = time.perf_counter()
    probes = gauge.ProbeSet.random(42, 5, 20)
    ops = gauge.build_pi_operators(1.0, 1.0, 0.2, 1.5)
    fd = gauge.fd_cross_check(ops, probes, tol=1e-8)
    field = _by_id(gauge.check_field_strengths(1.0, 1.0, 0.2, probes, E=1.5))
    kge = [gauge.check_kge_reduction(1.0, 1.0, 0.2, E, probes) for E in (0.0, 1.0, 10.0)]
    res = [r.values["operator_residual"] for r in kge]
    # the envelope carries the factor-2 finding
    path = tmp_path / "gauge.json"
    code = cli.main(["verify", "gauge", "--a1", "1", "--a2", "1", "--a3", "0.2", "--paper-notes", "--output", str(path)])
    env = json.loads(path.read_text())
    elapsed = time.perf_counter() - t0
    spatial = field["spatial_field_strength"]
    c_fit = spatial.fitted["c"]
    ok = (
        fd.passed
        and field["potential_commutator"].residual <= 1e-10
        and spatial.residual <= 1e-8
        and abs(c_fit - (-0.4j)) <= 1e-8
        and all(r.residual <= 1e-8 for r in kge)
        and max(res) - min(res) <= 1e-12
        and code == 0
        and any("-2i a3" in n for n in env["paper_notes"])
        and elapsed < 5.0
    )
    acceptance(
        6,
        ok,
        f"FD {fd.residual:.1e}, potential commutator {field['potential_commutator'].residual:.1e}, "
        f"c {c_fit:.6f}, KGE {max(r.residual for r in kge):.1e}, {elapsed:.2f}s",
    )
    assert ok


def test_criterion_7_cornell(acceptance):
    t0 = time.perf_counter()
    with warnings.catch_warnings():
        warnings.simplefilter("error", cornell.BoxSizeWarning)
        coul = cornell.solve_radial(cornell.RadialProblem(1.0, 0.0), 2).eigenvalues
        airy = cornell.solve_radial(cornell.RadialProblem(0.0, 1.0), 3).eigenvalues
    airy_ref = np.array(cornell.reference_oracles("airy", k=1.0, count=3))
    scaled = 2 ** (-1 / 3) * np.array(cornell.airy_zeros(3))
    coul_rel = float(np.max(np.abs(coul - [-0.5, -0.125]) / [0.5, 0.125]))
    airy_rel = float(np.max(np.abs(airy - airy_ref) / airy_ref))
    study = cornell.convergence_study(cornell.RadialProblem(0.0, 1.0), cornell.halving_grids(249, 4))
    sweep_k = [cornell.solve_radial(cornell.RadialProblem(1.0, k, n=1500), 1).eigenvalues[0] for k in (0.5, 1, 2)]
    sweep_l = [cornell.solve_radial(cornell.RadialProblem(1.0, 1.0, l=l, n=1500), 1).eigenvalues[0] for l in (0, 1, 2)]
    elapsed = time.perf_counter() - t0
    ok = (
        coul_rel <= 1e-4
        and airy_rel <= 1e-4
        and np.allclose(scaled, airy_ref, rtol=1e-14)
        and abs(study.order - 2.0) <= 0.2
        and np.all(np.diff(sweep_k) > 0)
        and np.all(np.diff(sweep_l) > 0)
        and elapsed < 30.0
    )
    acceptance(
        7, ok, f"Coulomb rel {coul_rel:.1e}, Airy rel {airy_rel:.1e}, order {study.order:.3f}, {elapsed:.1f}s"
    )
    assert ok


CLI_RUNS = [
    ["verify", "susy1d"],
    ["verify", "susy3d"],
    ["verify", "eta"],
    ["verify", "gauge"],
    ["algebra", "--chi", "-1", "--chi", "0", "--chi", "1"],
    ["spectrum", "cornell", "--levels", "2"],
    ["spectrum", "susy"],
    ["spectrum", "zb"],
]


def test_criterion_8_cli(acceptance, tmp_path):
    problems = []
    for i, argv in enumerate(CLI_RUNS):
        outs = []
        for j in range(2):
            path = tmp_path / f"{i}_{j}.json"
            code = cli.main(argv + ["--seed", "42", "--output", str(path)])
            text = path.read_text(encoding="utf-8")
            env = cli.validate_envelope(json.loads(text))
            if code != 0 or not env["overall_pass"]:
                problems.append(f"{argv}: exit {code}")
            env.pop("timestamp")
            outs.append(cli.dumps_json(env))
        if outs[0] != outs[1]:
            problems.append(f"{argv}: nondeterministic")
    path = tmp_path / "nb.json"
    code = cli.main(["spectrum", "cornell", "--alpha", "0", "--k", "0", "--output", str(path)])
    env = cli.validate_envelope(json.loads(path.read_text()))
    if code != 1 or env["reports"][0]["kind"] != "error":
        problems.append("no-bound-state case did not exit 1")
    path = tmp_path / "fail.json"
    if cli.main(["verify", "gauge", "--tol", "1e-16", "--output", str(path)]) != 1:
        problems.append("identity failure did not exit 1")
    if cli.main(["verify", "susy1d", "--cutoff", "3"]) != 2:
        problems.append("usage error did not exit 2")
    ok = not problems
    acceptance(8, ok, f"{len(CLI_RUNS)} subcommands deterministic, exit codes 0/1/2" if ok else "; ".join(problems))
    assert ok


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v"]))
