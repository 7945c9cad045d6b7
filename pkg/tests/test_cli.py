import csv
import io
import json

import pytest

from oscal import cli

COMMANDS = [
    ["verify", "susy1d", "--cutoff", "16"],
    ["verify", "susy3d", "--cutoff", "6"],
    ["verify", "eta"],
    ["verify", "gauge", "--a1", "1", "--a2", "1", "--a3", "0.2"],
    ["algebra", "--chi", "-1", "--chi", "0", "--chi", "1"],
    ["spectrum", "cornell", "--alpha", "1", "--k", "0", "--levels", "2", "--grid", "1000"],
    ["spectrum", "susy", "--cutoff", "16"],
    ["spectrum", "susy", "--dim", "3", "--cutoff", "6"],
    ["spectrum", "zb", "--cutoff", "16"],
]


def run(tmp_path, argv, name="out.json"):
    path = tmp_path / name
    code = cli.main(argv + ["--output", str(path)])
    return code, path.read_text(encoding="utf-8") if path.exists() else None


def strip_time(text):
    env = json.loads(text)
    env.pop("timestamp")
    return json.dumps(env, sort_keys=True)


@pytest.mark.parametrize("argv", COMMANDS, ids=lambda a: "-".join(a[:2]))
def test_every_subcommand(tmp_path, argv):
    code, text = run(tmp_path, argv)
    assert code == 0
    env = cli.validate_envelope(json.loads(text))
    assert env["overall_pass"] and env["reports"]
    assert env["command"] == " ".join(a for a in argv[:2] if not a.startswith("-"))
    assert "paper_notes" not in env
    # a second run differs at most in the timestamp
    code2, text2 = run(tmp_path, argv, "again.json")
    assert code2 == 0 and strip_time(text) == strip_time(text2)


def test_susy1d_report_count(tmp_path):
    _, text = run(tmp_path, ["verify", "susy1d", "--cutoff", "32"])
    env = json.loads(text)
    assert len(env["reports"]) == 7
    assert env["inputs"]["cutoff"] == 32 and env["inputs"]["seed"] == 42


def test_gauge_envelope_findings(tmp_path):
    _, text = run(tmp_path, ["verify", "gauge", "--paper-notes"])
    env = json.loads(text)
    reps = {r["identity_id"]: r for r in env["reports"]}
    assert reps["potential_commutator"]["passed"]
    assert reps["spatial_field_strength"]["fitted"]["c"]["im"] == pytest.approx(-0.4)
    assert any("-2i a3" in n for n in env["paper_notes"])


def test_algebra_labels(tmp_path):
    _, text = run(tmp_path, ["algebra", "--chi", "-1", "--chi", "0", "--chi", "1"])
    labels = [r["classification"] for r in json.loads(text)["reports"] if r["kind"] == "killing"]
    assert labels == ["so(5)", "Newton-Hooke", "so(3,2)"]


def test_exit_code_usage(tmp_path, capsys):
    assert cli.main(["verify", "susy1d", "--cutoff", "3"]) == 2
    assert "usage" in capsys.readouterr().err
    assert cli.main(["verify", "susy1d", "--cutoff", "x"]) == 2
    assert cli.main(["algebra"]) == 2
    assert cli.main(["spectrum", "cornell", "--levels", "0"]) == 2
    assert cli.main(["verify", "eta", "--eta", "sigma9"]) == 2
    assert cli.main(["nonsense"]) == 2
    assert cli.main(["verify", "susy1d", "--hbar", "-1"]) == 2
    assert cli.main(["verify", "susy1d", "--buffer", "0"]) == 2
    assert cli.main(["verify", "susy3d", "--cutoff", "5"]) == 2


def test_exit_code_failure(tmp_path):
    code, text = run(tmp_path, ["verify", "gauge", "--tol", "1e-16"])
    env = json.loads(text)
    assert code == 1 and not env["overall_pass"]
    assert any(not r["passed"] for r in env["reports"])


def test_no_bound_state(tmp_path):
    code, text = run(tmp_path, ["spectrum", "cornell", "--alpha", "0", "--k", "0"])
    env = cli.validate_envelope(json.loads(text))
    assert code == 1
    assert env["reports"][0]["kind"] == "error"
    assert env["reports"][0]["error_type"] == "NoBoundStateError"


def test_config_precedence(tmp_path, monkeypatch):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# cornell run\nalpha = 2.0\nlevels = 1\ngrid = 500\nseed = 9\n", encoding="utf-8")
    monkeypatch.setenv("OSCAL_SEED", "5")
    _, text = run(tmp_path, ["spectrum", "cornell", "--config", str(cfg), "--levels", "2"])
    inputs = json.loads(text)["inputs"]
    assert inputs["alpha"] == 2.0 and inputs["levels"] == 2 and inputs["grid"] == 500 and inputs["seed"] == 9


def test_env_seed(tmp_path, monkeypatch):
    monkeypatch.setenv("OSCAL_SEED", "5")
    _, text = run(tmp_path, ["verify", "gauge", "--functions", "2", "--points", "5"])
    assert json.loads(text)["inputs"]["seed"] == 5
    _, text = run(tmp_path, ["verify", "gauge", "--functions", "2", "--points", "5", "--seed", "6"])
    assert json.loads(text)["inputs"]["seed"] == 6
    monkeypatch.setenv("OSCAL_SEED", "abc")
    assert cli.main(["verify", "gauge"]) == 2


def test_seed_changes_probes(tmp_path):
    _, a = run(tmp_path, ["verify", "gauge", "--seed", "1"], "a.json")
    _, b = run(tmp_path, ["verify", "gauge", "--seed", "2"], "b.json")
    assert strip_time(a) != strip_time(b)


def test_config_rejections(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("alpha = 1\nbogus = 3\n", encoding="utf-8")
    assert cli.main(["spectrum", "cornell", "--config", str(bad)]) == 2
    bad.write_text("alpha = one\n", encoding="utf-8")
    assert cli.main(["spectrum", "cornell", "--config", str(bad)]) == 2
    bad.write_text("branch = sideways\n", encoding="utf-8")
    assert cli.main(["spectrum", "cornell", "--config", str(bad)]) == 2
    bad.write_text("just text\n", encoding="utf-8")
    assert cli.main(["spectrum", "cornell", "--config", str(bad)]) == 2
    assert cli.main(["spectrum", "cornell", "--config", str(tmp_path / "missing.cfg")]) == 2


def test_config_list_values(tmp_path):
    cfg = tmp_path / "chi.cfg"
    cfg.write_text("chi = -1, 1\n", encoding="utf-8")
    _, text = run(tmp_path, ["algebra", "--config", str(cfg)])
    assert json.loads(text)["inputs"]["chi"] == [-1.0, 1.0]


def test_csv_headers(tmp_path):
    _, text = run(tmp_path, ["spectrum", "cornell", "--levels", "2", "--grid", "1000", "--format", "csv"], "c.csv")
    rows = list(csv.DictReader(io.StringIO(text)))
    assert list(rows[0]) == ["level", "epsilon", "estimated_error", "E_plus", "E_minus"]
    assert float(rows[0]["epsilon"]) == pytest.approx(-0.5, rel=1e-4)
    _, text = run(tmp_path, ["spectrum", "zb", "--format", "csv"], "z.csv")
    assert text.splitlines()[0] == "index,eigenvalue,multiplicity,reliable"
    _, text = run(tmp_path, ["algebra", "--chi", "1", "--format", "csv"], "a.csv")
    assert text.splitlines()[0].startswith("chi,jacobi_residual,n_plus")
    _, text = run(tmp_path, ["verify", "susy1d", "--format", "csv"], "v.csv")
    assert text.splitlines()[0] == "identity_id,residual,tolerance,passed"


def test_text_format(tmp_path):
    _, text = run(tmp_path, ["algebra", "--chi", "-1", "--format", "text", "--paper-notes"], "a.txt")
    assert "so(5)" in text and "note:" in text and text.rstrip().endswith("PASS")


def test_cornell_branches(tmp_path):
    _, text = run(tmp_path, ["spectrum", "cornell", "--branch", "+", "--levels", "1", "--grid", "500"])
    row = json.loads(text)["reports"][0]["rows"][0]
    assert row["E_minus"] is None
    assert row["E_plus"] ** 2 == pytest.approx(1 + 2 * row["epsilon"], abs=1e-12)


def test_paper_notes_every_command(tmp_path):
    for argv in COMMANDS[:1] + COMMANDS[4:6]:
        _, text = run(tmp_path, argv + ["--paper-notes"])
        notes = json.loads(text)["paper_notes"]
        assert notes and all(isinstance(n, str) for n in notes)


def test_validate_envelope_rejects():
    env = cli.make_envelope("verify x", {}, [{"kind": "identity", "passed": True}], timestamp="2026-01-01T00:00:00+00:00")
    cli.validate_envelope(json.loads(cli.dumps_json(env)))
    for mutate in (
        lambda e: e.pop("tool"),
        lambda e: e.update(schema_version=2),
        lambda e: e.update(overall_pass=False),
        lambda e: e["reports"].append({"kind": "mystery", "passed": True}),
        lambda e: e.update(timestamp="yesterday"),
        lambda e: e.update(paper_notes=[3]),
    ):
        bad = json.loads(cli.dumps_json(env))
        mutate(bad)
        with pytest.raises(ValueError):
            cli.validate_envelope(bad)


def test_empty_report_list_fails():
    env = cli.make_envelope("x", {}, [])
    assert env["overall_pass"] is False


def test_nonfinite_values_become_null():
    env = cli.make_envelope("x", {"a": float("inf")}, [{"kind": "identity", "passed": True}])
    assert env["inputs"]["a"] is None
    cli.dumps_json(env)


def test_stdout_output(capsys):
    assert cli.main(["algebra", "--chi", "1"]) == 0
    cli.validate_envelope(json.loads(capsys.readouterr().out))


def test_version(capsys):
    assert cli.main(["--version"]) == 0
    assert "oscal" in capsys.readouterr().out
