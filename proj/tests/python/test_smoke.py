import json
import math
import os
import subprocess

import pytest

import lognls

CONFIGS = os.environ.get("LOGNLS_CONFIGS", os.path.join(os.path.dirname(__file__), "..", "..", "configs"))


def test_scenario_catalogue():
    lines = lognls.scenarios()
    assert len(lines) == 6
    assert any("crossing" in l for l in lines)


def test_validate_reports_key_facts():
    facts = lognls.validate(os.path.join(CONFIGS, "gaussian_closure.json"))
    assert facts["scenario"] == "gaussian"
    assert facts["packets"] == 1
    assert facts["lambda"] == -1.0


def test_validate_raises_typed_errors():
    with pytest.raises(lognls.ConfigError):
        lognls.validate(os.path.join(CONFIGS, "bad_schema.json"))
    with pytest.raises(lognls.ConstraintError):
        lognls.validate(os.path.join(CONFIGS, "bad_constraint.json"))


def test_log_lipschitz_gap_oracle():
    assert lognls.log_lipschitz_gap(1 + 0j, -1 + 0j) == pytest.approx(8.0)
    assert lognls.log_lipschitz_gap(0j, 2 + 0j) == pytest.approx(8.0)


def test_even_step_dt():
    assert lognls.even_step_dt(1.0, 0.3) == pytest.approx(0.25)


def test_tau_path_free_spreading():
    tau = lognls.tau_path(1.0, 0.0, 0.0, 0.0, 1.0, 1e-4)
    assert tau[0] == pytest.approx(1.0)
    assert tau[-1] == pytest.approx(math.sqrt(2.0), abs=1e-8)


def test_run_classical(tmp_path):
    cfg = {
        "scenario": "classical",
        "output_dir": str(tmp_path / "out"),
        "potential": {"kind": "harmonic", "omega": [1.0]},
        "packets": [{"q0": [1.0], "p0": [0.0]}],
        "T": 1.0,
        "flow_dt": 1e-3,
    }
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg))
    outdir = lognls.run(str(path))
    summary = json.loads((tmp_path / "out" / "summary.json").read_text())
    assert outdir == str(tmp_path / "out")
    assert summary["all_checks_pass"] is True
    header = (tmp_path / "out" / "records.csv").read_text().splitlines()[0]
    assert header == "eps,T,t,error,scenario,path,dt,delta,mass_drift"


def test_cli_and_module_agree_on_validation():
    cli = os.environ.get("LOGNLS_CLI")
    if not cli:
        pytest.skip("CLI path not provided")
    good = os.path.join(CONFIGS, "crossing_time.json")
    proc = subprocess.run([cli, "validate", good], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "crossing" in proc.stdout
