import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from fisher_regime.cli import main
from fisher_regime.harness import COLUMNS

GOLDEN = Path(__file__).parent / "golden"


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


OBSERVER_VERBS = ["fisher", "regime", "directional", "dynamics", "models"]


@pytest.mark.parametrize("verb", OBSERVER_VERBS)
def test_verbs_text_output(verb):
    code, out, err = run(verb, "--topology", "K3", "--J", "0.5")
    assert code == 0 and out and err == ""


@pytest.mark.parametrize("verb", OBSERVER_VERBS)
@pytest.mark.parametrize("topology", ["K3", "P6", "S5"])
def test_verbs_json_is_stable(verb, topology):
    code, out, _ = run(verb, "--topology", topology, "--J", "0.5", "--json")
    assert code == 0
    first = json.loads(out)
    assert run(verb, "--topology", topology, "--J", "0.5", "--json")[1] == out
    assert isinstance(first, dict)


def test_fisher_output():
    data = json.loads(run("fisher", "--topology", "K3", "--J", "0.5", "--json")[1])
    assert data["topology"] == "K3" and len(data["fisher"]) == 3
    assert data["cond_F"] == pytest.approx(2.8449, abs=1e-4)


def test_regime_output():
    data = json.loads(run("regime", "--topology", "K3", "--J", "0.5", "--model", "A", "--json")[1])
    assert data["alpha_pred"] == pytest.approx(0.430448, abs=1e-6)
    assert data["shifted_condition_at_c_star"] == pytest.approx(2.0, abs=1e-12)
    p6 = json.loads(run("regime", "--topology", "P6", "--J", "0.5", "--json")[1])
    assert p6["alpha_pred"] == 0.0
    code, text, _ = run("regime", "--topology", "P6", "--J", "0.5")
    assert "alpha_pred                   0.000000" in text


def test_regime_w_model():
    data = json.loads(run("regime", "--topology", "K4", "--J", "0.5", "--w", "2", "--json")[1])
    assert data["model"] == "W(2)"


def test_directional_output():
    data = json.loads(run("directional", "--topology", "K3", "--J", "0.5", "--json")[1])
    assert data["alpha_spread"] == pytest.approx(0.226, abs=0.005)
    assert abs(sum(data["deviation_eigs"])) < 1e-12
    assert sum(m[1] for m in data["multiplets"]) == 3


def test_dynamics_output(tmp_path):
    svg = tmp_path / "curve.svg"
    code, out, _ = run(
        "dynamics", "--topology", "K3", "--J", "0.5", "--alpha-grid", "0:0.9:0.1",
        "--eta-policy", "fixed", "--svg", str(svg),
    )
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "alpha,iterations" and len(lines) == 12
    assert svg.read_text().startswith("<svg")


def test_models_output():
    data = json.loads(run("models", "--topology", "K3", "--J", "0.5", "--json")[1])
    labels = [m["model"] for m in data["models"]]
    assert labels == ["A", "B", "C", "D", "W(1)"]
    by = {m["model"]: m for m in data["models"]}
    assert by["A"]["alpha_num"] == pytest.approx(data["alpha_pred"], abs=2e-3)
    assert by["B"]["alpha_num"] == pytest.approx(0.999)
    assert by["C"]["alpha_num"] == 0.0
    fisher = json.loads(run("models", "--topology", "K3", "--J", "0.5", "--hessian", "fisher", "--json")[1])
    assert all(m["alpha_num"] == pytest.approx(0.999) for m in fisher["models"])


def test_sweep_stdout_and_file(tmp_path):
    code, out, err = run("sweep")
    assert code == 0 and len(out.splitlines()) == 92
    assert "91 runs" in err
    target = tmp_path / "report.csv"
    assert run("sweep", "--out", str(target))[0] == 0
    assert target.read_text() == out
    code, js, _ = run("sweep", "--json", "--workers", "3")
    assert code == 0 and len(json.loads(js)) == 91


def test_sweep_golden_pass_and_fail(tmp_path):
    code, _, err = run("sweep", "--golden", str(GOLDEN / "reference_rows.csv"))
    assert code == 0 and "passed" in err
    tol = ",".join(f"{c}=1e-8" for c in COLUMNS if c not in ("topology", "J"))
    code, _, _ = run("sweep", "--golden", str(GOLDEN / "sweep_derived.csv"), "--tol", tol)
    assert code == 0
    bad = tmp_path / "bad.csv"
    bad.write_text("topology,J,alpha_pred\nK3,0.5,0.44\n")
    code, _, err = run("sweep", "--golden", str(bad), "--tol", "alpha_pred=0.002")
    assert code == 2
    assert "K3 J=0.5 alpha_pred: expected 0.44" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["fisher", "--topology", "BAD", "--J", "0.5"],
        ["fisher", "--topology", "K3"],
        ["fisher", "--topology", "K3", "--J", "0.5", "--bogus"],
        ["regime", "--topology", "K3", "--J", "0.5", "--model", "Z"],
        ["dynamics", "--topology", "K3", "--J", "0.5", "--alpha-grid", "0:1"],
        ["sweep", "--tol", "alpha_pred"],
        ["sweep", "--golden", "/nonexistent/golden.csv"],
        ["frobnicate"],
        [],
    ],
)
def test_errors_exit_one_with_usage(argv):
    code, out, err = run(*argv)
    assert code == 1
    assert "usage:" in err and out == ""


def test_schema_mismatch_is_domain_error(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("topology,J,nonsense\nK3,0.5,1\n")
    code, _, err = run("sweep", "--golden", str(bad))
    assert code == 1 and "error" in err


def test_nan_coupling_rejected():
    code, _, err = run("fisher", "--topology", "K3", "--J", "nan")
    assert code == 1


def test_console_script_entry():
    out = subprocess.run(
        [sys.executable, "-m", "fisher_regime.cli", "regime", "--topology", "P6", "--J", "0.5", "--json"],
        capture_output=True, text=True,
    )
    assert out.returncode == 0 and json.loads(out.stdout)["alpha_pred"] == 0.0
