from __future__ import annotations

import io
import json
import subprocess
import sys

import pytest

from chainstretch.cli import main


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


@pytest.fixture
def abcd(tmp_path):
    f = tmp_path / "abcd.txt"
    f.write_text("# four points\n0,0\n10,0\n5,1\n5,-1\n", encoding="utf-8")
    return f


def test_stretch_triangle(tmp_path):
    f = tmp_path / "t.txt"
    f.write_text("0,0\n1,0\n0,1\n", encoding="utf-8")
    code, out = run("stretch", "--input", str(f))
    assert code == 0 and json.loads(out) == {"stretch": 1.0, "witness": [0, 1], "n": 3}


def test_stretch_abcd(abcd):
    code, out = run("stretch", "--input", str(abcd))
    assert code == 0
    assert json.loads(out)["stretch"] == pytest.approx(1.0198039027185570, rel=1e-12)
    code, out = run("stretch", "--input", str(abcd), "--csv")
    assert out.splitlines()[0] == "n,stretch,witness_i,witness_j"


@pytest.mark.parametrize("body", ["0,0\nx;y\n1,1\n", "0,0\n1,1\n", "0,0\n1,1\n2,2\n", "0,0\n0,0\n1,0\n"])
def test_stretch_bad_input(tmp_path, body, capsys):
    f = tmp_path / "bad.txt"
    f.write_text(body, encoding="utf-8")
    assert run("stretch", "--input", str(f))[0] == 2
    assert "error" in capsys.readouterr().err


def test_stretch_missing_file_and_flags(tmp_path):
    assert run("stretch", "--input", str(tmp_path / "nope.txt"))[0] == 2
    assert run("stretch")[0] == 2
    assert run("bogus")[0] == 2
    assert run("random", "--json", "--csv")[0] == 2


def test_random_csv():
    code, out = run("random", "--n", "3", "--trials", "5", "--seed", "4")
    lines = out.splitlines()
    assert code == 0
    assert lines[0] == "seed,n,trial,stretch,witness_i,witness_j"
    assert [ln.split(",")[3] for ln in lines[1:]] == ["1"] * 6
    assert lines[-1].startswith("4,3,max,")


def test_random_deterministic(monkeypatch):
    a = run("random", "--n", "30", "--trials", "6", "--seed", "42")[1]
    monkeypatch.setenv("STRETCH_THREADS", "2")
    b = run("random", "--n", "30", "--trials", "6", "--seed", "42")[1]
    assert a == b


def test_random_json_and_timing():
    code, out = run("random", "--n", "10", "--trials", "2", "--json", "--timing")
    doc = json.loads(out)
    assert code == 0 and doc["pass"] and len(doc["records"]) == 2 and "runtime_ms" in doc["records"][0]
    _, out = run("random", "--n", "10", "--trials", "2", "--timing")
    assert out.splitlines()[0].endswith(",runtime_ms")


def test_random_bad_params(monkeypatch):
    assert run("random", "--n", "2")[0] == 2
    assert run("random", "--trials", "0")[0] == 2
    monkeypatch.setenv("STRETCH_THREADS", "many")
    assert run("random", "--n", "5", "--trials", "1")[0] == 2


def test_certify():
    code, out = run("certify")
    doc = json.loads(out)
    assert code == 0 and doc["pass"] and all(q["apex"] < 0 for q in doc["inequalities"])
    assert run("certify", "--lambda", "2.2")[0] == 1
    code, out = run("certify", "--guard", "-10", "--csv")
    assert code == 1 and "depth_exhausted" in out
    assert run("certify", "--guard", "1")[0] == 2


def test_chain_suite_random():
    code, out = run("chain-suite", "--count", "10", "--max-n", "4", "--seed", "7", "--pairs", "8")
    doc = json.loads(out)
    assert code == 0 and doc["total_violations"] == 0 and doc["max_upsilon"] < 0
    assert out == run("chain-suite", "--count", "10", "--max-n", "4", "--seed", "7", "--pairs", "8")[1]
    assert run("chain-suite", "--count", "0")[0] == 2
    assert run("chain-suite", "--max-n", "1")[0] == 2
    assert run("chain-suite", "--samples", "3")[0] == 2


def test_chain_suite_file(tmp_path):
    f = tmp_path / "sym.txt"
    f.write_text("0,0,1\n1,0,1\nu:-1,0 v:2,0\n", encoding="utf-8")
    code, out = run("chain-suite", "--input", str(f))
    doc = json.loads(out)
    assert code == 0 and doc["upsilon"] == pytest.approx(-1.3117218208022742, abs=1e-9)
    code, out = run("chain-suite", "--input", str(f), "--csv")
    assert "upsilon," in out and "violations.stab_order,0" in out
    f.write_text("0,0,1\n3,0,1\n", encoding="utf-8")
    assert run("chain-suite", "--input", str(f))[0] == 2
    f.write_text("0,0,1\n1,0,1\nu:1,0 v:2,0\n", encoding="utf-8")
    assert run("chain-suite", "--input", str(f))[0] == 2


def test_lowerbound():
    code, out = run("lowerbound", "--n", "64")
    s = json.loads(out)["stretch"]
    assert code == 0 and 1.4 <= s < 1.998
    code, out = run("lowerbound", "--n", "8")
    assert json.loads(out)["stretch"] > 1.1
    assert run("lowerbound", "--n", "7")[0] == 2


def test_help_documents_csv_columns():
    out = subprocess.run([sys.executable, "-m", "chainstretch.cli", "random", "--help"],
                         capture_output=True, text=True, check=True).stdout
    assert "seed,n,trial,stretch,witness_i,witness_j" in out
    assert "STRETCH_THREADS" in out


def test_console_exit_code(abcd):
    proc = subprocess.run([sys.executable, "-m", "chainstretch.cli", "lowerbound", "--n", "3"],
                          capture_output=True, text=True)
    assert proc.returncode == 2
