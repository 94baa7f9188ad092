import json
import subprocess
import sys

import pytest

from ffmoduli.cli import main

from conftest import CONFIGS


def run(capsys, *argv):
    code = main(list(argv))
    return code, json.loads(capsys.readouterr().out)


def test_count_n_output(capsys, tmp_path):
    out = tmp_path / "r.json"
    code, data = run(capsys, "count-n", "--config", str(CONFIGS / "xy_q3.json"), "--out", str(out))
    assert code == 0
    assert data["schema"] == "ffmoduli/1"
    assert data["q"] == "3" and data["seed"] == "0"
    assert data["result"]["N"] == "53"
    assert set(data["versions"]) == {"ffmoduli", "numpy", "python"}
    assert json.loads(out.read_text()) == data


def test_output_is_deterministic(capsys):
    args = ("shrink", "--config", str(CONFIGS / "quadric_q3.json"), "--samples", "3", "--seed", "7")
    assert run(capsys, *args) == run(capsys, *args)


@pytest.mark.parametrize(
    "argv",
    [
        ["circle-exact", "--config", "xy_q3.json"],
        ["verify-decomposition", "--config", "diag_cubic_q7.json", "--samples", "3"],
        ["weyl-identities", "--config", "cube_line_q5.json", "--samples", "5"],
        ["decouple", "--config", "quadric_q3.json"],
        ["lemma-t-bound", "--config", "xy_q3.json", "--j", "1"],
        ["n-counts", "--config", "xy_q3.json", "--e", "2", "--j", "3", "--J", "2", "--samples", "2"],
        ["shrink", "--config", "quadric_q3.json", "--samples", "3"],
        ["approx", "--config", "quadric_q3.json", "--samples", "3"],
        ["major-arc", "--config", "xy_q3.json", "--j", "1", "--samples", "5"],
        ["dichotomy", "--config", "xy_q3.json", "--j", "1"],
        ["sigma", "--config", "xy_q3.json"],
        ["mean-value", "--config", "cube_line_q5.json", "--j", "0", "--rho", "5"],
        ["smallchar", "--e", "1", "--p", "3"],
        ["acceptance", "--only", "1", "10"],
    ],
)
def test_commands_pass(capsys, argv):
    argv = [str(CONFIGS / a) if a.endswith(".json") else a for a in argv]
    code, data = run(capsys, *argv)
    assert code == 0, data
    assert data["pass"] is True


def test_ratio_report_over_directory(capsys):
    code, data = run(capsys, "ratio-report", "--config", str(CONFIGS / "split4"), "--strategy", "linear-solve")
    assert code == 0
    assert [r["N"] for r in data["result"]["rows"]] == ["5409", "183025"]


def test_budget_failure_exits_one(capsys):
    code, data = run(capsys, "count-n", "--config", str(CONFIGS / "xy_q3.json"), "--budget-box", "10")
    assert code == 1
    assert data["error"]["type"] == "BudgetExceeded"


def test_missing_config_exits_one(capsys):
    code, data = run(capsys, "decouple")
    assert code == 1 and data["pass"] is False


def test_unknown_command_exits_two():
    proc = subprocess.run([sys.executable, "-m", "ffmoduli", "frobnicate"], capture_output=True, text=True)
    assert proc.returncode == 2
