import json
import math

import pytest

from fracplap.cli import dumps, main, parse_grid, parse_number


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_eval_example(capsys):
    code, out, _ = run(capsys, "eval", "--n", "1", "--s", "0.5", "--p", "2", "--x", "0.3")
    assert code == 0
    rep = json.loads(out)
    assert set(rep) == {"params", "config", "rows", "summary"}
    (row,) = rep["rows"]
    assert row["status"] == "ok"
    assert abs(row["value"] - math.pi) <= max(row["err_est"], 1e-9)


def test_eval_outside_support(capsys):
    code, out, err = run(capsys, "eval", "--x", "1.5")
    assert code == 2 and out == ""
    assert "x outside open support" in err


def test_identity(capsys):
    code, out, _ = run(capsys, "identity", "--s", "0.5", "--p", "3")
    assert code == 0
    assert abs(json.loads(out)["summary"]["residual"]) <= 1e-6


def test_fraction_flags(capsys):
    _, a, _ = run(capsys, "eval", "--s", "1/3", "--p", "5/2", "--x", "1/4")
    _, b, _ = run(capsys, "eval", "--s", repr(1 / 3), "--p", "2.5", "--x", "0.25")
    assert a == b
    assert parse_number("1/3") == 1 / 3
    assert parse_number(" 0.5 ") == 0.5


def test_usage_errors(capsys):
    assert run(capsys, "eval", "--s", "abc", "--x", "0.1")[0] == 2
    assert run(capsys, "eval", "--s", "1.5", "--x", "0.1")[0] == 2
    assert run(capsys, "eval")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "sweep", "--grid", "0:1")[0] == 2
    assert run(capsys, "identity", "--format", "csv")[0] == 2


def test_nonconvergence_exit(capsys):
    code, _, err = run(capsys, "eval", "--x", "0.3", "--abs-tol", "1e-300",
                       "--rel-tol", "1e-300")
    assert code == 3 and "convergence" in err


def test_io_error_exit(capsys, tmp_path):
    code, _, _ = run(capsys, "eval", "--x", "0.3", "--out", str(tmp_path / "no" / "f.json"))
    assert code == 4


def test_csv_output(capsys, tmp_path):
    out = tmp_path / "s.csv"
    code, _, _ = run(capsys, "sweep", "--p", "3", "--grid", "0:0.5:3", "--format", "csv",
                     "--out", str(out))
    assert code == 0
    data = out.read_bytes()
    assert b"\r" not in data
    lines = data.decode().splitlines()
    assert lines[0] == "x,value,err_est,n_evals,status"
    assert len(lines) == 4 and all(line.endswith(",ok") for line in lines[1:])


def test_empty_sweep_csv(capsys):
    code, out, _ = run(capsys, "sweep", "--grid", "0:0.5:0", "--format", "csv")
    assert code == 0 and out == "x,value,err_est,n_evals,status\n"


def test_one_point_eval_csv(capsys):
    code, out, _ = run(capsys, "eval", "--x", "0.2", "--format", "csv")
    assert code == 0 and len(out.splitlines()) == 2


def test_json_round_trip_and_determinism(capsys):
    argv = ("sweep", "--s", "0.3", "--p", "4", "--grid", "0:0.9:5")
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert a == b
    assert dumps(json.loads(a)) == a


def test_jobs_keep_grid_order(capsys):
    argv = ("sweep", "--p", "3", "--grid", "-0.9:0.9:7")
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv, "--jobs", "3")
    assert a == b


def test_config_precedence(capsys, tmp_path):
    conf = tmp_path / "c.json"
    conf.write_text(json.dumps({"s": 0.25, "p": 3, "x": 0.4}))
    _, out, _ = run(capsys, "eval", "--config", str(conf))
    assert json.loads(out)["params"]["s"] == 0.25
    _, out, _ = run(capsys, "eval", "--config", str(conf), "--s", "0.75")
    rep = json.loads(out)
    assert rep["params"]["s"] == 0.75 and rep["params"]["p"] == 3
    bad = tmp_path / "b.json"
    bad.write_text(json.dumps({"colour": 1}))
    assert run(capsys, "eval", "--config", str(bad))[0] == 2


def test_dumps_format():
    text = dumps({"b": [0.1, float("nan"), 1], "a": {"z": True, "y": None}})
    assert text.index('"a"') < text.index('"b"')
    assert "0.10000000000000001" in text and "null" in text
    assert json.loads(text)["b"][1] is None


def test_parse_grid():
    assert parse_grid("0:1:3") == [0.0, 0.5, 1.0]
    assert parse_grid("1/4:1/4:1") == [0.25]


def test_other_commands(capsys):
    code, out, _ = run(capsys, "closedform", "--p", "4", "--x", "0")
    assert code == 0
    assert json.loads(out)["rows"][0]["value"] == pytest.approx(6 * math.log(2) - 3)
    code, out, _ = run(capsys, "lsp", "--n", "2", "--p", "3", "--t", "1.05")
    assert code == 0
    summ = json.loads(out)["summary"]
    assert summ["finite"] is False and summ["value"] is None
    code, out, _ = run(capsys, "scaling", "--s", "0.5", "--p", "4", "--rho", "2", "--x", "0.6")
    assert code == 0 and json.loads(out)["summary"]["relative_error"] <= 1e-4
    code, out, _ = run(capsys, "compare-methods", "--s", "0.3", "--p", "3", "--x", "0.99")
    assert code == 0 and json.loads(out)["summary"]["all_agree"] is True
    code, out, _ = run(capsys, "hopf", "--s", "0.5", "--p", "3")
    assert code == 0 and json.loads(out)["summary"]["trace_above_bound"] is True
    code, out, _ = run(capsys, "singfit", "--s", "0.5", "--p", "2", "--format", "csv")
    assert code == 0 and len(out.splitlines()) == 12


def test_verify_subset(capsys):
    code, out, _ = run(capsys, "verify", "--criteria", "2,9")
    assert code == 0
    assert out.count("[PASS]") == 2
    code, out, err = run(capsys, "verify", "--criteria", "9", "--format", "json")
    summ = json.loads(out)["summary"]
    assert summ["passed"] is True
    (crit,) = summ["criteria"]
    assert set(crit) >= {"name", "expected", "got", "tol", "pass"}
    assert "[PASS]" in err
