import io
from pathlib import Path

from cohdiff.cli import main

DEMO = Path(__file__).resolve().parent.parent / "demo"


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def test_check_demo_program():
    code, text = run("check", str(DEMO / "basic.cohdiff"))
    assert code == 0
    assert "term t : a & b" in text
    assert "term u : D D c" in text


def test_check_type_error_exit_code(tmp_path):
    bad = tmp_path / "bad.cohdiff"
    bad.write_text("fn f : (a) -> a;\nterm t [x: b] = f(x);\n")
    code, text = run("check", str(bad))
    assert code == 1
    assert "type error" in text


def test_check_parse_error_exit_code(tmp_path):
    bad = tmp_path / "bad.cohdiff"
    bad.write_text("term t = <x;\n")
    code, text = run("check", str(bad))
    assert code == 1
    assert "parse error" in text


def test_diff_prints_term_and_type():
    code, text = run("diff", str(DEMO / "basic.cohdiff"), "--term", "u", "--var", "x")
    assert code == 0
    assert "theta_1(f^[1,0,1,0](x, iota0(y)))" in text
    assert "type : D D D c" in text


def test_reduce_trace_and_normal_form():
    code, text = run(
        "reduce", str(DEMO / "basic.cohdiff"), "--term", "v", "--trace"
    )
    assert code == 0
    assert "#1 pi0-theta @ 0 : [pi0(pi0(iota0(iota0(x))))]" in text
    assert "normal : [x] (3 steps)" in text


def test_reduce_fuel_exhausted_exit_code():
    code, text = run(
        "reduce", str(DEMO / "basic.cohdiff"), "--term", "v", "--fuel", "1"
    )
    assert code == 2
    assert "fuel exhausted" in text


def test_reduce_env_fuel_override(monkeypatch):
    monkeypatch.setenv("COHDIFF_FUEL", "1")
    code, _ = run("reduce", str(DEMO / "basic.cohdiff"), "--term", "v")
    assert code == 2
    monkeypatch.setenv("COHDIFF_FUEL", "50")
    code, _ = run("reduce", str(DEMO / "basic.cohdiff"), "--term", "v")
    assert code == 0


def test_eval_matrix_and_point():
    code, text = run(
        "eval",
        str(DEMO / "nat.cohdiff"),
        "--model",
        str(DEMO / "nat.pcsmodel"),
        "--term",
        "branch",
        "--at",
        "L.0=1,R.L.1=1/2",
    )
    assert code == 0
    assert "entry (L.0, R.L.1) -> 1 : 1" in text
    assert "value 1 = 1/2" in text


def test_eval_model_error_exit_code(tmp_path):
    bad = tmp_path / "bad.pcsmodel"
    bad.write_text("object N { web = [0]; predual = [[0]]; }\n")
    code, text = run(
        "eval",
        str(DEMO / "nat.cohdiff"),
        "--model",
        str(bad),
        "--term",
        "branch",
    )
    assert code == 3
    assert "model error" in text


def test_laws_pass_and_determinism():
    code1, text1 = run("laws", "--backend", "pcs", "--seed", "7", "--cases", "4")
    code2, text2 = run("laws", "--backend", "pcs", "--seed", "7", "--cases", "4")
    assert code1 == code2 == 0
    assert text1 == text2
    assert "LAW D-Schwarz PASS cases=4" in text1


def test_laws_negative_control_exit_code():
    code, text = run(
        "laws", "--backend", "pcs-corrupt-sigma", "--seed", "1", "--cases", "2"
    )
    assert code == 4
    assert "LAW D-zero FAIL" in text


def test_theorems_subcommand():
    code, text = run("theorems", "--cases", "4", "--seed", "5")
    assert code == 0
    assert "all theorems hold" in text


def test_unknown_term_is_usage_error():
    code, text = run("reduce", str(DEMO / "basic.cohdiff"), "--term", "nope")
    assert code == 5
    assert "no term named" in text


def test_bad_flags_are_usage_errors():
    code, _ = run("laws", "--backend", "unknown")
    assert code == 5
    code, _ = run("reduce", str(DEMO / "basic.cohdiff"), "--term", "v", "--fuel", "0")
    assert code == 5


def test_walkthrough_script_runs():
    import subprocess
    import sys

    result = subprocess.run(
        [sys.executable, str(DEMO / "walkthrough.py")],
        capture_output=True,
        text=True,
        timeout=120,
    )
    assert result.returncode == 0, result.stderr
    assert "all 33 laws pass: True" in result.stdout
    assert "THEOREM differential HOLDS" in result.stdout
