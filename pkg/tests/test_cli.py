import json
import subprocess
import sys

import numpy as np

from sumprod.cli import main
from sumprod.field import make_field
from sumprod.setstats import SubsetFq, write_subset
from sumprod.spectral import fourier_forward


def run_cli(*args, env=None):
    return subprocess.run([sys.executable, "-m", "sumprod", *args], capture_output=True,
                          text=True, env=env)


def test_transform_prints_spectrum(tmp_path, capsys):
    F = make_field(3, 2)
    A = SubsetFq.from_elements(9, [0, 3, 7])
    path = tmp_path / "a.txt"
    write_subset(path, F, A)
    assert main(["transform", "--field", "3^2", "--set", str(path)]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "m,re,im" and len(lines) == 10
    got = np.array([complex(float(r), float(i)) for _, r, i in (ln.split(",") for ln in lines[1:])])
    assert np.max(np.abs(got - fourier_forward(F, A.bits.astype(float)))) < 1e-9
    assert main(["transform", "--set", str(path), "--fast"]) == 0


def test_transform_field_mismatch(tmp_path):
    path = tmp_path / "a.txt"
    write_subset(path, make_field(3, 2), SubsetFq.from_elements(9, [1]))
    assert main(["transform", "--field", "2^3", "--set", str(path)]) == 2


def test_experiment_writes_report(tmp_path):
    cfg = {"fields": ["3^2"], "families": [{"kind": "subfield", "degree": 1}], "sizes": [3],
           "master_seed": 1, "output": {"path": str(tmp_path / "r.json"), "format": "json"}}
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(cfg))
    assert main(["experiment", "--config", str(cfg_path)]) == 0
    rows = json.loads((tmp_path / "r.json").read_text())
    assert rows[0]["ratio"] == 1.0 and rows[0]["checks_passed"] is True
    assert main(["experiment", "--config", str(cfg_path), "--output", str(tmp_path / "r.csv"),
                 "--format", "csv"]) == 0
    assert (tmp_path / "r.csv").read_text().startswith("q,p,l,family,mode")


def test_experiment_missing_config(tmp_path, capsys):
    assert main(["experiment", "--config", str(tmp_path / "nope.json")]) == 2
    assert "error" in capsys.readouterr().err


def test_cap_env_var(tmp_path):
    import os
    env = dict(os.environ, SUMPROD_CAP="8")
    path = tmp_path / "a.txt"
    write_subset(path, make_field(3, 2), SubsetFq.from_elements(9, [1]))
    res = run_cli("transform", "--set", str(path), env=env)
    assert res.returncode == 2 and "exceeds the cap" in res.stderr


def test_verify_exit_code_and_output(tmp_path):
    res = run_cli("verify", "--output", str(tmp_path / "v.csv"))
    assert res.returncode == 0, res.stdout + res.stderr
    assert res.stdout.count("[PASS]") == 9
    assert (tmp_path / "v.csv").read_text().splitlines()[0] == "criterion,name,passed,detail"
