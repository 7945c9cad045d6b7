"""Command-line front end.

    oscal verify {susy1d,susy3d,eta,gauge} [flags]
    oscal algebra --chi X [--chi Y ...]
    oscal spectrum {cornell,susy,zb} [flags]

Every run emits a report envelope (JSON by default, or CSV / text)::

    {
      "schema_version": 1,
      "tool": "oscal",
      "tool_version": "0.1.0",
      "timestamp": "2026-01-01T00:00:00+00:00",
      "command": "verify susy1d",
      "inputs": {...every resolved parameter...},
      "reports": [{"kind": ..., "passed": ..., ...}, ...],
      "overall_pass": true,
      "paper_notes": [...]            # only with --paper-notes
    }

Exit codes: 0 when every report passes, 1 on any failed check or solver
error (the error is recorded as a report of kind ``"error"``), 2 on usage
errors. Parameters resolve as flag > config file > ``OSCAL_SEED`` (seed
only) > built-in default. Config files are flat ``key = value`` lines with
``#`` comments; keys are flag names without the dashes.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from datetime import datetime, timezone

from . import __version__
from .opkernel import DomainError, SizingError, UnitSystem, _jsonable

SCHEMA_VERSION = 1
DEFAULT_SEED = 42
REPORT_KINDS = ("identity", "pairing", "killing", "structure_coefficients", "spectrum", "error")

_COMMON_DEFAULTS = {"hbar": 1.0, "m0": 1.0, "omega": 1.0, "c": 1.0, "format": "json", "output": None}

DEFAULTS = {
    ("verify", "susy1d"): {"cutoff": 32, "buffer": 2, "tol": 1e-10},
    ("verify", "susy3d"): {"cutoff": 6, "buffer": 2, "tol": 1e-10, "pair_tol": 1e-8},
    ("verify", "eta"): {"eta": ["I2", "sigma1", "sigma3"], "cutoff": 6, "buffer": 2, "tol": 1e-12},
    ("verify", "gauge"): {
        "a1": 1.0, "a2": 1.0, "a3": 0.2, "E": 1.5, "functions": 5, "points": 20, "tol": 1e-8, "exact_tol": 1e-10,
    },
    ("algebra", None): {"chi": None},
    ("spectrum", "cornell"): {
        "alpha": 1.0, "k": 0.0, "l": 0, "sigma3": 1, "branch": "both", "levels": 3, "grid": 4000, "R": None, "a3": 0.0,
    },
    ("spectrum", "susy"): {"dim": 1, "cutoff": None, "buffer": 2},
    ("spectrum", "zb"): {"cutoff": 32, "buffer": 2, "tol": 1e-8},
}

PAPER_NOTES = {
    "susy1d": [
        "[Q,P] = +(2i sigma3/omega) H_SS; the printed form -(2i sigma3/omega) H_SS has the opposite sign",
        "Q^2 prefactor: printed c/(hbar omega^3), derived c^2/(hbar omega^3)",
    ],
    "susy3d": [
        "Q^2 prefactor: printed c/(3 hbar omega^3), derived c^2/(3 hbar omega^3)",
        "Q^2 and P^2 are proportional to H_DO + (3/2) hbar omega beta, not to H_DO itself; "
        "the deformed [Q,P] is written with H_DO",
    ],
    "eta": ["spatial brackets carry the metric sign: [P^i, Q^j] = i hbar g^ij eta^2, g^ij = -delta^ij"],
    "gauge": [
        "[Pi_i, Pi_j] = c (sigma3/r) L_k: printed c = -i a3, derived c = -2i a3",
        "[Pi0, Pi_k] contains first-order derivative terms absent from the printed multiplication form",
        "Cornell mapping: derived alpha_s = -(a1^2 + 2 hbar c^2 a3 s)/(2 m0 c^2), k = -a2^2/(2 m0 c^2); "
        "printed alpha = a1^2/(2 m0 c^2) - 2 hbar a3 sigma3, k = a2^2/(2 m0 c^2)",
    ],
    "algebra": [
        "zeta: printed -chi/omega, derived -chi/(m0 omega)",
        "xi = -chi m0 omega agrees with the printed value; the printed relation xi = m0 omega^2 zeta holds only with the printed zeta, with the derived zeta it is off by a factor m0",
    ],
    "cornell": ["levels take alpha, k directly; the (a1, a2, a3) -> (alpha, k) mapping is reported by verify gauge"],
}
PAPER_NOTES["susy"] = PAPER_NOTES["susy1d"] + PAPER_NOTES["susy3d"]
PAPER_NOTES["zb"] = PAPER_NOTES["susy1d"][:1]


class UsageError(Exception):
    pass


# --- parser ---------------------------------------------------------------


def _common(p):
    p.add_argument("--config", help="flat key=value file; flags override it")
    p.add_argument("--seed", type=int, help=f"RNG seed (default: $OSCAL_SEED or {DEFAULT_SEED})")
    p.add_argument("--format", choices=["json", "csv", "text"])
    p.add_argument("--output", help="write here instead of stdout")
    p.add_argument("--paper-notes", action="store_true", default=None, help="append discrepancy annotations")
    for name in ("hbar", "m0", "omega", "c"):
        p.add_argument(f"--{name}", type=float)


def build_parser():
    parser = argparse.ArgumentParser(prog="oscal", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"oscal {__version__}")
    top = parser.add_subparsers(dest="command", required=True)
    leaves = {}

    verify = top.add_parser("verify", help="operator identity suites")
    vsub = verify.add_subparsers(dest="target", required=True)
    p = vsub.add_parser("susy1d", help="(1+1)D charge identities")
    p.add_argument("--cutoff", type=int)
    p.add_argument("--buffer", type=int)
    p.add_argument("--tol", type=float)
    leaves[("verify", "susy1d")] = p
    p = vsub.add_parser("susy3d", help="(3+1)D charge identities and pairing")
    p.add_argument("--cutoff", type=int, help="maximum total quanta")
    p.add_argument("--buffer", type=int)
    p.add_argument("--tol", type=float)
    p.add_argument("--pair-tol", type=float)
    leaves[("verify", "susy3d")] = p
    p = vsub.add_parser("eta", help="eta-representation brackets")
    p.add_argument("--eta", action="append")
    p.add_argument("--cutoff", type=int)
    p.add_argument("--buffer", type=int)
    p.add_argument("--tol", type=float)
    leaves[("verify", "eta")] = p
    p = vsub.add_parser("gauge", help="minimal-coupling commutators and KGE reduction")
    for name in ("a1", "a2", "a3", "E"):
        p.add_argument(f"--{name}", type=float)
    p.add_argument("--functions", type=int)
    p.add_argument("--points", type=int)
    p.add_argument("--tol", type=float)
    p.add_argument("--exact-tol", type=float)
    leaves[("verify", "gauge")] = p

    p = top.add_parser("algebra", help="Jacobi check and Killing classification")
    p.add_argument("--chi", type=float, action="append")
    leaves[("algebra", None)] = p

    spectrum = top.add_parser("spectrum", help="eigenvalue listings")
    ssub = spectrum.add_subparsers(dest="target", required=True)
    p = ssub.add_parser("cornell", help="Coulomb-plus-linear radial levels")
    p.add_argument("--alpha", type=float)
    p.add_argument("--k", type=float)
    p.add_argument("--l", type=int)
    p.add_argument("--sigma3", type=int, choices=[1, -1])
    p.add_argument("--branch", choices=["+", "-", "both"])
    p.add_argument("--levels", type=int)
    p.add_argument("--grid", type=int, help="interior points of the coarse grid")
    p.add_argument("--R", type=float, help="box radius (default: automatic)")
    p.add_argument("--a3", type=float)
    leaves[("spectrum", "cornell")] = p
    p = ssub.add_parser("susy", help="H_SS levels with reliability flags")
    p.add_argument("--dim", type=int, choices=[1, 3])
    p.add_argument("--cutoff", type=int)
    p.add_argument("--buffer", type=int)
    leaves[("spectrum", "susy")] = p
    p = ssub.add_parser("zb", help="H_ZB interior levels")
    p.add_argument("--cutoff", type=int)
    p.add_argument("--buffer", type=int)
    p.add_argument("--tol", type=float)
    leaves[("spectrum", "zb")] = p

    for leaf in leaves.values():
        _common(leaf)
    return parser, leaves


def read_config(path):
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key = value")
            key, value = (s.strip() for s in line.split("=", 1))
            out[key.replace("-", "_")] = value
    return out


def _convert(action, value):
    if action.type is None:
        if action.const is True or isinstance(action, argparse._StoreTrueAction):
            return value.lower() in ("1", "true", "yes", "on")
        return value
    return action.type(value)


def resolve(args, leaf):
    """Merge flags, config file, environment and defaults into one dict."""
    key = (args.command, getattr(args, "target", None))
    defaults = dict(_COMMON_DEFAULTS, paper_notes=False, **DEFAULTS[key])
    actions = {a.dest: a for a in leaf._actions}
    config = read_config(args.config) if args.config else {}
    resolved = {}
    for name in list(defaults) + ["seed"]:
        value = getattr(args, name, None)
        if value is None and name in config:
            action = actions[name]
            raw = config.pop(name)
            try:
                if action.nargs is None and isinstance(action, argparse._AppendAction):
                    value = [_convert(action, v.strip()) for v in raw.split(",")]
                else:
                    value = _convert(action, raw)
            except (TypeError, ValueError):
                raise UsageError(f"config key {name!r}: invalid value {raw!r}") from None
            if action.choices is not None and not set(value if isinstance(value, list) else [value]) <= set(
                action.choices
            ):
                raise UsageError(f"config key {name!r}: {raw!r} not in {sorted(map(str, action.choices))}")
        else:
            config.pop(name, None)
        if value is None and name == "seed":
            env = os.environ.get("OSCAL_SEED")
            if env is not None:
                try:
                    value = int(env)
                except ValueError:
                    raise UsageError(f"OSCAL_SEED must be an integer, got {env!r}") from None
            else:
                value = DEFAULT_SEED
        if value is None:
            value = defaults.get(name)
        resolved[name] = value
    if config:
        raise UsageError(f"unknown config keys: {', '.join(sorted(config))}")
    if resolved["seed"] < 0:
        raise UsageError("seed must be a nonnegative integer")
    return resolved


# --- commands -------------------------------------------------------------


def _units(p):
    try:
        return UnitSystem(p["hbar"], p["m0"], p["omega"], p["c"])
    except DomainError as exc:
        raise UsageError(str(exc)) from None


def _identity(report):
    out = report.to_dict()
    out["kind"] = "identity"
    return out


def run_verify(target, p):
    units = _units(p)
    if target == "susy1d":
        from .susy import build_susy_1d, verify_identities_1d

        bundle = build_susy_1d(p["cutoff"], units)
        return [_identity(r) for r in verify_identities_1d(bundle, p["buffer"], p["tol"])]
    if target == "susy3d":
        from .susy import build_susy_3d, susy_pairing_check, verify_identities_3d

        bundle = build_susy_3d(p["cutoff"], units)
        reports = [_identity(r) for r in verify_identities_3d(bundle, p["buffer"], p["tol"])]
        pairing = susy_pairing_check(bundle, p["buffer"])
        out = pairing.to_dict()
        out["kind"] = "pairing"
        out["passed"] = bool(
            pairing.all_positive_even
            and pairing.max_pairing_residual <= p["pair_tol"]
            and pairing.min_reliable_eigenvalue >= -p["tol"]
        )
        reports.append(out)
        return reports
    if target == "eta":
        from .fockrep import ETA_CHOICES, build_eta_representation, eta_bracket_residual
        from .opkernel import VerificationReport

        reports = []
        for name in p["eta"]:
            if name not in ETA_CHOICES:
                raise UsageError(f"unknown eta {name!r}; choose from {', '.join(ETA_CHOICES)}")
            rep = build_eta_representation(name, p["cutoff"], units)
            residual = eta_bracket_residual(rep, units, p["buffer"])
            reports.append(
                _identity(
                    VerificationReport(
                        f"eta_brackets[{name}]",
                        "[P^i, Q^j] = i hbar g^ij (eta^2 (x) I)",
                        residual,
                        p["tol"],
                        values={"trace_label": rep.trace_label, "eta_dim": rep.n},
                    )
                )
            )
        return reports
    if target == "gauge":
        from .gauge import ProbeSet, build_pi_operators, check_field_strengths, check_kge_reduction, fd_cross_check

        probes = ProbeSet.random(p["seed"], p["functions"], p["points"])
        ops = build_pi_operators(p["a1"], p["a2"], p["a3"], p["E"], units)
        reports = [fd_cross_check(ops, probes, tol=p["tol"])]
        reports += check_field_strengths(
            p["a1"], p["a2"], p["a3"], probes, p["E"], units, p["tol"], p["exact_tol"]
        )
        reports.append(check_kge_reduction(p["a1"], p["a2"], p["a3"], p["E"], probes, units, p["tol"]))
        return [_identity(r) for r in reports]
    raise UsageError(f"unknown verify target {target!r}")


def run_algebra(p):
    import sympy as sp

    from . import lie

    if not p["chi"]:
        raise UsageError("algebra needs at least one --chi")
    units = _units(p)
    reports = []
    for chi in p["chi"]:
        if not math.isfinite(chi):
            raise UsageError(f"chi must be finite, got {chi}")
        t = lie.structure_tensor(chi)
        jac = lie.jacobi_residual(t)
        k = lie.killing_form(t)
        out = k.to_dict()
        out.update(
            kind="killing",
            jacobi_residual=jac,
            centralizer_dimension=lie.centralizer_dimension(t),
            rotations_conserved=lie.conserved_rotations_check(t).passed,
            passed=bool(jac == 0.0 and k.classification != "unclassified"),
        )
        reports.append(out)
    coeffs = lie.derive_structure_coefficients()
    zeta_ok = sp.simplify(coeffs.zeta + lie.CHI / (lie.M0 * lie.OMEGA)) == 0
    xi_ok = sp.simplify(coeffs.xi + lie.CHI * lie.M0 * lie.OMEGA) == 0
    reports.append(
        {
            "kind": "structure_coefficients",
            "zeta": str(coeffs.zeta),
            "xi": str(coeffs.xi),
            "zeta_dimensionless": str(coeffs.zeta_dimensionless),
            "xi_dimensionless": str(coeffs.xi_dimensionless),
            "zeta_printed": str(coeffs.zeta_printed),
            "zeta_matches_printed": bool(sp.simplify(coeffs.zeta - coeffs.zeta_printed) == 0),
            "xi_from_printed_relation": str(coeffs.xi_printed_relation),
            "evaluated": [
                dict(chi=chi, **coeffs.evaluate(chi, units.m0, units.omega)) for chi in p["chi"]
            ],
            "passed": bool(zeta_ok and xi_ok),
        }
    )
    return reports


def _levels_report(spec, rows, passed=True, **extra):
    out = {"kind": "spectrum", "spectrum": spec, "rows": rows, "passed": bool(passed)}
    out.update(extra)
    return out


def run_spectrum(target, p):
    units = _units(p)
    if target == "cornell":
        from .cornell import RadialProblem, map_energy, solve_radial

        if not 1 <= p["levels"] <= 20:
            raise UsageError("--levels must be between 1 and 20")
        problem = RadialProblem(p["alpha"], p["k"], p["l"], p["sigma3"], units, p["R"], p["grid"])
        import warnings

        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            result = solve_radial(problem, p["levels"])
        emap = map_energy(result, p["a3"], p["branch"], units)
        rows = []
        for i, (eps, err) in enumerate(zip(result.eigenvalues, result.estimated_error)):
            rows.append(
                {
                    "level": i + 1,
                    "epsilon": float(eps),
                    "estimated_error": float(err),
                    "E_plus": emap.E_plus[i] if p["branch"] in ("+", "both") else None,
                    "E_minus": emap.E_minus[i] if p["branch"] in ("-", "both") else None,
                }
            )
        meta = result.to_dict()
        return [
            _levels_report(
                "cornell",
                rows,
                grid=meta["grid"],
                box_warning=meta["box_warning"],
                tail_weights=meta["tail_weights"],
                mappable=emap.mappable,
            )
        ]
    if target == "susy":
        from .susy import build_susy_1d, build_susy_3d, susy_spectrum

        cutoff = p["cutoff"] or (32 if p["dim"] == 1 else 6)
        bundle = build_susy_1d(cutoff, units) if p["dim"] == 1 else build_susy_3d(cutoff, units)
        spec = susy_spectrum(bundle, p["buffer"])
        return [_levels_report("susy", spec.rows(), dim=p["dim"], cutoff=cutoff)]
    if target == "zb":
        from .susy import build_susy_1d, zb_spectrum

        spec = zb_spectrum(build_susy_1d(p["cutoff"], units), p["buffer"])
        return [
            _levels_report(
                "zb",
                spec.rows(),
                passed=spec.symmetry_residual <= p["tol"],
                symmetry_residual=spec.symmetry_residual,
                commutes_with_chi=spec.commutes_with_chi,
            )
        ]
    raise UsageError(f"unknown spectrum target {target!r}")


# --- output ---------------------------------------------------------------


def _finite(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {k: _finite(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_finite(v) for v in obj]
    return obj


def make_envelope(command, inputs, reports, notes=None, timestamp=None):
    env = {
        "schema_version": SCHEMA_VERSION,
        "tool": "oscal",
        "tool_version": __version__,
        "timestamp": timestamp or datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "command": command,
        "inputs": inputs,
        "reports": reports,
        "overall_pass": bool(reports) and all(r.get("passed") for r in reports),
    }
    if notes is not None:
        env["paper_notes"] = list(notes)
    return _finite(_jsonable(env))


def validate_envelope(env):
    """Raise ``ValueError`` unless ``env`` follows the envelope schema."""
    required = {
        "schema_version": int, "tool": str, "tool_version": str, "timestamp": str,
        "command": str, "inputs": dict, "reports": list, "overall_pass": bool,
    }
    for key, typ in required.items():
        if key not in env:
            raise ValueError(f"missing field {key!r}")
        if not isinstance(env[key], typ):
            raise ValueError(f"field {key!r} must be {typ.__name__}")
    if env["schema_version"] != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema version {env['schema_version']}")
    for r in env["reports"]:
        if not isinstance(r, dict) or r.get("kind") not in REPORT_KINDS or not isinstance(r.get("passed"), bool):
            raise ValueError(f"malformed report {r!r}")
    if env["overall_pass"] != (bool(env["reports"]) and all(r["passed"] for r in env["reports"])):
        raise ValueError("overall_pass disagrees with the reports")
    if "paper_notes" in env and not all(isinstance(n, str) for n in env["paper_notes"]):
        raise ValueError("paper_notes must be a list of strings")
    datetime.fromisoformat(env["timestamp"])
    return env


def dumps_json(env):
    return json.dumps(env, sort_keys=True, indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def _csv_rows(env):
    reports = env["reports"]
    kinds = {r["kind"] for r in reports}
    if kinds == {"spectrum"}:
        rows = [row for r in reports for row in r["rows"]]
        return list(rows[0]) if rows else [], rows
    if "killing" in kinds:
        header = ["chi", "jacobi_residual", "n_plus", "n_minus", "n_zero", "classification", "passed"]
        rows = [
            dict(
                chi=r["chi"], jacobi_residual=r["jacobi_residual"], n_plus=r["signature"][0],
                n_minus=r["signature"][1], n_zero=r["signature"][2], classification=r["classification"],
                passed=r["passed"],
            )
            for r in reports
            if r["kind"] == "killing"
        ]
        return header, rows
    header = ["identity_id", "residual", "tolerance", "passed"]
    rows = []
    for r in reports:
        if r["kind"] == "identity":
            rows.append({k: r[k] for k in header})
        elif r["kind"] == "pairing":
            rows.append(
                {"identity_id": "pairing", "residual": r["max_pairing_residual"], "tolerance": None,
                 "passed": r["passed"]}
            )
        else:
            rows.append({"identity_id": r["kind"], "residual": None, "tolerance": None, "passed": r["passed"]})
    return header, rows


def dumps_csv(env):
    buf = io.StringIO()
    header, rows = _csv_rows(env)
    writer = csv.DictWriter(buf, fieldnames=header, lineterminator="\n", extrasaction="ignore")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: ("" if v is None else repr(v) if isinstance(v, float) else v) for k, v in row.items()})
    return buf.getvalue()


def dumps_text(env):
    lines = [f"oscal {env['tool_version']}  {env['command']}"]
    for r in env["reports"]:
        flag = "PASS" if r["passed"] else "FAIL"
        if r["kind"] == "identity":
            lines.append(f"{flag}  {r['identity_id']:<32} residual={r['residual']:.3e}  tol={r['tolerance']:.1e}")
        elif r["kind"] == "killing":
            lines.append(f"{flag}  chi={r['chi']:<8g} {r['classification']:<14} signature={tuple(r['signature'])}")
        elif r["kind"] == "spectrum":
            lines.append(f"{flag}  {r['spectrum']} spectrum, {len(r['rows'])} rows")
            for row in r["rows"]:
                lines.append("      " + "  ".join(f"{k}={v}" for k, v in row.items()))
        elif r["kind"] == "error":
            lines.append(f"FAIL  error: {r['message']}")
        else:
            lines.append(f"{flag}  {r['kind']}")
    for note in env.get("paper_notes", []):
        lines.append(f"note: {note}")
    lines.append("overall: " + ("PASS" if env["overall_pass"] else "FAIL"))
    return "\n".join(lines) + "\n"


def _emit(env, fmt, path):
    text = {"json": dumps_json, "csv": dumps_csv, "text": dumps_text}[fmt](env)
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None):
    parser, leaves = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    key = (args.command, getattr(args, "target", None))
    leaf = leaves[key]
    command = " ".join(k for k in key if k)
    try:
        p = resolve(args, leaf)
    except (UsageError, OSError) as exc:
        leaf.print_usage(sys.stderr)
        print(f"oscal: error: {exc}", file=sys.stderr)
        return 2

    from .cornell import NoBoundStateError

    try:
        if args.command == "verify":
            reports = run_verify(args.target, p)
        elif args.command == "algebra":
            reports = run_algebra(p)
        else:
            reports = run_spectrum(args.target, p)
    except NoBoundStateError as exc:
        reports = [{"kind": "error", "error_type": type(exc).__name__, "message": str(exc), "passed": False}]
    except (UsageError, SizingError, DomainError) as exc:
        leaf.print_usage(sys.stderr)
        print(f"oscal: error: {exc}", file=sys.stderr)
        return 2

    note_key = args.target if args.command != "algebra" else "algebra"
    notes = PAPER_NOTES.get(note_key, []) if p["paper_notes"] else None
    inputs = {k: v for k, v in p.items() if k not in ("output", "format")}
    env = make_envelope(command, inputs, reports, notes)
    try:
        _emit(env, p["format"], p["output"])
    except OSError as exc:
        print(f"oscal: error: cannot write output: {exc}", file=sys.stderr)
        return 2
    if not env["overall_pass"]:
        print(f"oscal: {command}: one or more checks failed", file=sys.stderr)
    return 0 if env["overall_pass"] else 1


if __name__ == "__main__":
    sys.exit(main())
