import json
import subprocess
import sys

import pytest

from hyperchen.cli import main

# Every documented command, with arguments small enough to run quickly.
COMMANDS = [
    ["perm", "info", "4 -3 -5 6 -2 1"],
    ["perm", "compose", "2 -3 1", "3 1 2"],
    ["perm", "inverse", "-3 1 -2"],
    ["perm", "st", "-2 7 -1 2", "--ties", "stable"],
    ["conv", "2 3 1", "1"],
    ["conv", "1 -2", "2 -1"],
    ["shuffle", "1 2", "3 4"],
    ["basis", "R", "2", ""],
    ["basis", "T", "3", "1"],
    ["basis", "D", "3", "2"],
    ["omega", "--max-degree", "3"],
    ["omega", "--max-degree", "3", "--basis", "canonical"],
    ["sol", "3"],
    ["eval", "angle", "-3 1 -2", "--seed", "1"],
    ["eval", "bracket", "^1 -2", "--seed", "1", "--lower", "-1/2", "--upper", "1/3"],
    ["eval", "composite", "2 -1", "--tail", "1"],
    ["eval", "picard", "2", "--dim", "3"],
    ["verify", "golden"],
    ["verify", "corollary"],
    ["dump", "model", "--dim", "2", "--seed", "5"],
    ["dump", "pic", "--max-degree", "2"],
]


def run(args):
    proc = subprocess.run([sys.executable, "-m", "hyperchen", *args], capture_output=True)
    return proc.returncode, proc.stdout, proc.stderr


@pytest.mark.parametrize("args", COMMANDS, ids=lambda a: " ".join(a))
def test_deterministic_and_successful(args):
    rc1, out1, err1 = run(args)
    rc2, out2, _ = run(args)
    assert rc1 == 0, err1.decode()
    assert (rc1, out1) == (rc2, out2)
    json.loads(out1)


def test_conv_golden(capsys):
    assert main(["conv", "2 3 1", "1"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert [t["perm"] for t in data["terms"]] == ["2 3 1 4", "2 4 1 3", "3 4 1 2", "3 4 2 1"]
    assert {t["coef"] for t in data["terms"]} == {"1/1"}


def test_basis_empty_subset(capsys):
    assert main(["basis", "R", "2", ""]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["id"]["S"] == []
    assert len(data["element"]["terms"]) == 4


def test_verify_chen_exit_zero(capsys):
    assert main(["verify", "chen", "--max-total-degree", "4", "--dim", "2", "--seed", "7"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["passed"] and report["seed"] == 7


def test_model_file_flow(tmp_path, capsys):
    path = tmp_path / "m.json"
    assert main(["dump", "model", "--dim", "2", "--seed", "3"]) == 0
    path.write_text(capsys.readouterr().out)
    assert main(["verify", "recursion", "--model", str(path)]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["passed"] and all("seed" not in c["params"] for c in report["checks"])


@pytest.mark.parametrize("args", [
    ["perm", "info", "1 1"],
    ["conv", "2 x"],
    ["perm", "st", "-2 7 -1 2"],
    ["omega", "--max-degree", "9"],
    ["eval", "picard", "5", "--dim", "2"],
    ["basis", "R", "3", "3"],
    ["eval", "angle", "1", "--model", "/nonexistent/model.json"],
])
def test_domain_errors_exit_2(args, capsys):
    assert main(args) == 2
    assert "error" in capsys.readouterr().err


def test_usage_error_exit_2():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_verification_failure_exit_1(monkeypatch, capsys):
    from hyperchen import verify
    from hyperchen.verify import CheckReport

    monkeypatch.setitem(verify.SUITES, "golden", lambda opts: [CheckReport("forced", {}, False, {"at": 0})])
    assert main(["verify", "golden"]) == 1
    assert json.loads(capsys.readouterr().out)["passed"] is False


def test_malformed_model_file(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text('{"dim": 2}')
    assert main(["eval", "angle", "1", "--model", str(path)]) == 2
