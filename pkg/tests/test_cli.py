import csv
import json
import subprocess
import sys

import jsonschema
import pytest

from laplace_qm.cli import PATHOLOGY_SCHEMA, SOLVE_SCHEMA, VERIFY_SCHEMA, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_solve_morse_lists_bound_states(capsys):
    code, out, _ = run(capsys, "solve", "--oscillator", "morse", "--c", "3")
    assert code == 0
    report = json.loads(out)
    jsonschema.validate(report, SOLVE_SCHEMA)
    states = report["states"]
    assert [s["n"] for s in states] == [0, 1, 2]
    assert [s["energy"] for s in states] == [-6.25, -2.25, -0.25]
    assert states[2]["available"] is False


def test_solve_harmonic_first_excited(capsys):
    code, out, _ = run(capsys, "solve", "--oscillator", "harmonic", "--n", "1")
    assert code == 0
    (state,) = json.loads(out)["states"]
    assert state["V"]["terms"] == [{"coeff": 1.0, "factors": [[0.0, -2.0]], "exp_poly": []}]
    assert state["v"]["smooth"] == [{"coeff": 1.0, "power": 1, "decay": 0.0}]
    assert (state["v0"], state["v0prime"]) == (0.0, 1.0)


def test_solve_no_bound_states(capsys):
    code, _, err = run(capsys, "solve", "--oscillator", "morse", "--c", "0.4")
    assert code == 3
    assert "no bound states" in err


def test_solve_invalid_quantum_number(capsys):
    code, _, err = run(capsys, "solve", "--oscillator", "morse", "--c", "3", "--n", "3")
    assert code == 2
    assert "Morse requires n < c - 1/2" in err


def test_solve_missing_parameter(capsys):
    code, _, _ = run(capsys, "solve", "--oscillator", "morse")
    assert code == 2


def test_solve_psi_csv(capsys, tmp_path):
    path = tmp_path / "psi.csv"
    code, _, _ = run(capsys, "solve", "--oscillator", "pt", "--ell", "2",
                     "--psi-csv", str(path), "--points", "11", "--normalize",
                     "--output", str(tmp_path / "s.json"))
    assert code == 0
    rows = list(csv.reader(path.open()))
    assert rows[0] == ["x", "psi_0", "psi_1"]
    assert len(rows) == 12
    jsonschema.validate(json.loads((tmp_path / "s.json").read_text()), SOLVE_SCHEMA)


def test_verify_default_passes(capsys):
    code, out, _ = run(capsys, "verify")
    report = json.loads(out)
    jsonschema.validate(report, VERIFY_SCHEMA)
    assert code == 0 and report["passed"]


def test_verify_perturbed_boundary_value_fails(capsys):
    code, out, err = run(capsys, "verify", "--perturb-v0", "0.1", "--check", "s-residual",
                         "--oscillator", "harmonic", "--n", "0")
    assert code == 1
    assert "s-residual" in err
    assert json.loads(out)["failed"] == ["s-residual"]


def test_verify_tw_residual_pair(capsys):
    code, out, _ = run(capsys, "verify", "--check", "tw-residual",
                       "--oscillator", "harmonic", "--n", "0")
    assert code == 0
    (check,) = json.loads(out)["checks"]
    pair = check["details"]["harmonic[n=0]"]
    assert pair["homogeneous_pass"] and pair["homogeneous_max_residual"] <= 1e-8
    assert pair["true_boundary_fail"] and pair["true_boundary_min_residual"] >= 0.1


def test_verify_unknown_check(capsys):
    code, _, _ = run(capsys, "verify", "--check", "nonsense")
    assert code == 2


def test_pathology_outputs(capsys, tmp_path):
    code, out, _ = run(capsys, "pathology", "--gamma", "20,30", "--out-dir", str(tmp_path))
    assert code == 0
    assert out.count("plateau=") == 2
    summary = json.loads((tmp_path / "pathology_summary.json").read_text())
    jsonschema.validate(summary, PATHOLOGY_SCHEMA)
    rows = list(csv.reader((tmp_path / "pathology_gamma_20.csv").open()))
    assert rows[0] == ["xi", "gamma_xi_over_2pi", "xi_over_gamma", "g", "abs_g"]
    assert float(rows[-1][2]) == pytest.approx(2.0, abs=0.02)
    for name in ("pathology_fig_a.svg", "pathology_fig_b.svg"):
        svg = (tmp_path / name).read_text()
        assert 'viewBox="0 0 800 500"' in svg and "<polyline" in svg


def test_pathology_csv_bit_stable(capsys, tmp_path):
    for d in ("one", "two"):
        run(capsys, "pathology", "--gamma", "40", "--fig", "a", "--out-dir",
            str(tmp_path / d), "--workers", "3" if d == "two" else "1")
    a = (tmp_path / "one" / "pathology_gamma_40.csv").read_bytes()
    b = (tmp_path / "two" / "pathology_gamma_40.csv").read_bytes()
    assert a == b


def test_pathology_fig_b_range(capsys, tmp_path):
    code, _, _ = run(capsys, "pathology", "--gamma", "50", "--fig", "b",
                     "--xi-over-gamma-max", "2", "--out-dir", str(tmp_path))
    assert code == 0
    rows = list(csv.reader((tmp_path / "pathology_gamma_50.csv").open()))
    assert float(rows[-1][2]) == pytest.approx(2.0, abs=0.01)
    assert not (tmp_path / "pathology_fig_a.svg").exists()


def test_pathology_bad_gamma(capsys, tmp_path):
    code, _, _ = run(capsys, "pathology", "--gamma", "5", "--out-dir", str(tmp_path))
    assert code == 2


def test_pathology_budget_env(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("BROMWICH_POINT_BUDGET", "100")
    code, _, err = run(capsys, "pathology", "--gamma", "50", "--out-dir", str(tmp_path))
    assert code == 2
    assert "budget" in err


def test_figure_panels(capsys, tmp_path):
    code, out, _ = run(capsys, "figure", "--gamma", "20", "--panel", "a",
                       "--out-dir", str(tmp_path))
    assert code == 0
    assert (tmp_path / "fig1_a.svg").exists() and not (tmp_path / "fig1_b.svg").exists()
    assert "fig1_a.svg" in out


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "laplace_qm", "solve", "--oscillator",
                          "harmonic", "--n", "0"], capture_output=True, text=True, check=True)
    assert json.loads(res.stdout)["states"][0]["energy"] == 0.5
