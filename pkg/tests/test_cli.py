import subprocess
import sys

import pytest

from infloss.cli import main


def run(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_pointwise_demo(capsys):
    code, out, _ = run(["pointwise-demo"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "quantity,output,value"
    assert "rho_ac,c,0.458333333333" in lines
    assert "predict_IL,c,1" in lines and "predict_AC,a,1" in lines and "predict_SP,a,1" in lines
    assert "risk_SP,a,1" in lines and "risk_SP,b,2" in lines


def test_fas_bench(capsys):
    code, out, _ = run(["fas-bench", "--m-min", "3", "--m-max", "4", "--trials", "5"], capsys)
    assert code == 0
    assert out.splitlines() == ["m,trials,integral_fraction", "3,5,1", "4,5,1"]


def test_experiment_with_config(tmp_path, capsys):
    cfg = tmp_path / "cfg.txt"
    cfg.write_text("n=40\nc_sigma=1\nc_lambda=1\nc_grid=0.3\n")
    code, out, _ = run(["experiment", "classification", "--config", str(cfg), "--folds", "2"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "method,c,fold,risk"
    assert len(lines) == 1 + 3 * 2


def test_out_file(tmp_path, capsys):
    p = tmp_path / "o.csv"
    code, out, _ = run(["pointwise-demo", "--out", str(p)], capsys)
    assert code == 0 and out == ""
    assert p.read_text().startswith("quantity,output,value\n")


def test_parse_libsvm(tmp_path, capsys):
    p = tmp_path / "d.svm"
    p.write_text("1 1:0.5 3:2\n0 2:1\n")
    code, out, _ = run(["parse-libsvm", str(p)], capsys)
    assert code == 0
    assert out.splitlines() == ["row,label,index,value", "0,1,1,0.5", "0,1,3,2", "1,0,2,1"]
    code, out, _ = run(["parse-libsvm", str(p), "--dense"], capsys)
    assert out.splitlines() == ["label,f1,f2,f3", "1,0.5,0,2", "0,0,1,0"]


def test_computation_failure_exits_1(tmp_path, capsys):
    p = tmp_path / "bad.svm"
    p.write_text("1 2:1 2:2\n")
    code, _, err = run(["parse-libsvm", str(p)], capsys)
    assert code == 1 and "line 1, column 7" in err
    code, _, err = run(["parse-libsvm", str(tmp_path / "missing.svm")], capsys)
    assert code == 1 and err.startswith("infloss: error:")


@pytest.mark.parametrize("args", [
    ["experiment"],
    ["experiment", "classification", "--bogus"],
    ["fas-bench", "--m-min", "5", "--m-max", "3"],
    ["experiment", "classification", "--c", "2.0"],
    ["experiment", "classification", "--config", "/nonexistent/file"],
    ["nosuchcommand"],
])
def test_usage_errors_exit_2(args, capsys):
    with pytest.raises(SystemExit) as exc:
        main(args)
    assert exc.value.code == 2


def test_module_entry_point_is_deterministic():
    cmd = [sys.executable, "-m", "infloss", "fas-bench", "--seed", "0", "--m-max", "5", "--trials", "10"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and a.startswith(b"m,trials,integral_fraction\n")
