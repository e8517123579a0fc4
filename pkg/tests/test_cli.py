import json
import os
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest

from leafclass.cli import run

SCHEMA = json.loads(resources.files("leafclass").joinpath("data/report.schema.json").read_text())


def _report(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr().out
    return code, out


@pytest.mark.parametrize("argv", [
    ["jet", "--order", "5", "--samples", "4"],
    ["wn", "--n", "1", "--weight", "0", "--max-degree", "4"],
    ["gk", "--order", "5"],
    ["reeb", "--grid", "3"],
    ["site"],
    ["probe", "--candidate", "zero", "--grid", "3"],
    ["cech", "--cochains", "3", "--max-k", "1"],
])
def test_commands_pass_and_match_schema(capsys, argv):
    code, out = _report(capsys, *argv)
    report = json.loads(out)
    jsonschema.validate(report, SCHEMA)
    assert code == 0 and report["passed"] is True
    assert report["command"] == argv[0] and report["timing"] is None


def test_failures_exit_one(capsys):
    code, out = _report(capsys, "site", "--mutate", "2")
    assert code == 1
    report = json.loads(out)
    failed = [c for c in report["checks"] if c["verdict"] == "fail"]
    assert failed and all("witness" in c for c in failed)
    code, _ = _report(capsys, "reeb", "--profile", "expr:t^2", "--grid", "3")
    assert code == 1


def test_probe_non_closed_candidate_fails(capsys):
    code, out = _report(capsys, "probe", "--lambda", "alpha_2=alpha_0", "--grid", "2")
    assert code == 1
    assert json.loads(out)["checks"][0]["name"] == "closed[lambda]"


@pytest.mark.parametrize("argv", [
    ["jet", "--order", "99"],
    ["reeb", "--profile", "nonsense"],
    ["probe", "--candidate", "nope"],
    ["cech", "--config", "/nonexistent/config.json"],
    ["site", "--format", "csv"],
    ["frobnicate"],
])
def test_usage_errors_exit_two(capsys, argv):
    assert run(argv) == 2


def test_precision_env(capsys, monkeypatch):
    monkeypatch.setenv("LEAFCLASS_PRECISION", "128")
    _, out = _report(capsys, "reeb", "--grid", "2", "--orders", "3")
    assert json.loads(out)["config"]["precision"] == 128
    monkeypatch.setenv("LEAFCLASS_PRECISION", "lots")
    assert run(["reeb"]) == 2


def test_csv_and_text_outputs(capsys, tmp_path):
    path = tmp_path / "table.csv"
    code, out = _report(capsys, "reeb", "--grid", "2", "--orders", "3", "--csv", str(path))
    assert code == 0
    assert path.read_text().splitlines()[0] == "n,k,t,ratio,ratio_derivative,f2_over_f1,precision"
    code, out = _report(capsys, "site", "--format", "text")
    assert out.startswith("site: PASS")
    target = tmp_path / "r.json"
    assert run(["site", "--timing", "-o", str(target)]) == 0
    assert json.loads(target.read_text())["timing"]["seconds"] >= 0


def test_custom_config(capsys, tmp_path):
    from leafclass.config import load_config

    data = load_config(None)
    data["checks"]["cochains"] = 2
    data["order"] = 2
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(data))
    code, out = _report(capsys, "cech", "--config", str(path), "--max-k", "1")
    assert code == 0
    assert json.loads(out)["config"]["cochains"] == 2


def test_byte_identical_across_hash_seeds():
    outputs = []
    for hashseed in ("1", "4242"):
        env = dict(os.environ, PYTHONHASHSEED=hashseed)
        proc = subprocess.run([sys.executable, "-m", "leafclass", "cech", "--cochains", "3", "--seed", "9"],
                              capture_output=True, env=env, check=False)
        outputs.append(proc.stdout)
    assert outputs[0] == outputs[1] and outputs[0]
