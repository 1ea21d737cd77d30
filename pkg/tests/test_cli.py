import json

import pytest

from spincms.cli import dump_matrix, main
from spincms.errors import UnboundedBlock


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify_hecke_passes(capsys, tmp_path):
    out_file = tmp_path / "r.jsonl"
    code, out, _ = run(capsys, "verify", "hecke", "--n", "3", "--s", "2", "--degree", "2", "--trials", "2",
                       "--out", str(out_file))
    assert code == 0
    lines = out.strip().splitlines()
    assert json.loads(lines[0])["config"]["suite"] == "hecke"
    assert json.loads(lines[-1])["ok"] is True
    assert out_file.read_text() == out


def test_verify_classical_lax(capsys):
    code, out, _ = run(capsys, "verify", "classical-lax", "--s", "1", "--mode-cutoff", "2", "--zmax", "2")
    assert code == 0


def test_verify_failure_exit_code(capsys):
    code, out, _ = run(capsys, "verify", "dunkl-commute", "--n", "1", "--s", "1", "--degree", "1")
    assert code == 1
    assert json.loads(out.strip().splitlines()[-1])["ok"] is False


def test_verify_rejects_zero_beta(capsys):
    code, _, err = run(capsys, "verify", "rtt", "--beta", "0")
    assert code == 2 and "InvalidConfig" in err


def test_unknown_suite(capsys):
    code, _, err = run(capsys, "verify", "nope")
    assert code == 2 and "UnknownSuite" in err


def test_config_file_and_flag_precedence(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# small run\ns = 1\nn = 2\ndegree = 1\ntrials = 1\nseed = 4\n")
    code, out, _ = run(capsys, "verify", "hecke", "--config", str(cfg), "--seed", "9")
    conf = json.loads(out.splitlines()[0])["config"]
    assert code == 0 and conf["seed"] == 9 and conf["n"] == 2


def test_bad_config_file(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("colour = 3\n")
    code, _, err = run(capsys, "verify", "hecke", "--config", str(cfg))
    assert code == 2 and "InvalidConfig" in err


def test_repeat_runs_identical(capsys):
    args = ("verify", "hecke", "--n", "2", "--s", "2", "--degree", "2", "--trials", "2", "--seed", "7")
    _, a, _ = run(capsys, *args)
    _, b, _ = run(capsys, *args)
    assert a == b


@pytest.mark.parametrize("argv,expect", [
    (("fock:H2scalar", "p[1,1]", "--s", "1"), "(beta*lam[1] - beta + 1)*p[1,1]"),
    (("finite:d", "x[1,0]", "--n", "2", "--s", "1", "-p", "i=2"), "0"),
    (("fock:H1", "1", "--s", "1", "--lambda", "3"), "3*beta"),
    (("fock:T", "p[1,1]", "--s", "2", "-p", "a=1", "-p", "b=2"), "lam[1]*q[1,-1]*p[1,1]"),
    (("classical:flow", "alpha[-1,1]*alpha[1,1] + alpha[-2,1]*alpha[2,1] + alpha[-3,1]*alpha[3,1]",
      "-p", "M=3"), "0"),
])
def test_apply(capsys, argv, expect):
    code, out, _ = run(capsys, "apply", *argv)
    assert code == 0 and out.strip() == expect


@pytest.mark.parametrize("argv,err", [
    (("fock:H1", "p[0]"), "ParseError"),
    (("fock:nope", "p[1,1]"), "UnknownOperator"),
    (("fock:T", "p[1,1]", "-p", "a=1"), "InvalidConfig"),
])
def test_apply_errors(capsys, argv, err):
    code, _, e = run(capsys, "apply", *argv)
    assert code == 2 and err in e


def test_matrix_h1_block():
    text = dump_matrix("fock:H1", 2, 1, beta="1/2", lam="2")
    lines = text.splitlines()
    assert "p[1,1]^2 p[2,1]" in lines[1]
    rows = [l for l in lines if not l.startswith("#")]
    # H1 is diagonal on the grade-2 block: grade + beta (lam^2 - lam)/2 = 2 + 1/2
    assert rows == ["5/2,0", "0,5/2"]


def test_matrix_sector_shift_is_rectangular():
    text = dump_matrix("fock:T", 2, 2, params={"a": 1, "b": 2})
    assert "sector=[1, -1]" in text.splitlines()[1]
    assert "shape 5x5" in text


def test_matrix_lowering_to_empty_block():
    text = dump_matrix("fock:alpha", 0, 1, params={"n": 1, "a": 1})
    assert "shape 0x1" in text
    assert [l for l in text.splitlines() if not l.startswith("#")] == []


def test_matrix_csv_file(capsys, tmp_path):
    out = tmp_path / "m.csv"
    code, _, _ = run(capsys, "matrix", "fock:H1", "--grade", "1", "--s", "2", "--out", str(out))
    assert code == 0 and out.read_text().count("\n") == 6


@pytest.mark.parametrize("kwargs", [
    dict(name="fock:H1", grade=-1, s=1),
    dict(name="fock:H1", grade=None, s=1),
    dict(name="fock:H1", grade=1, s=2, sector=(0,)),
    dict(name="finite:H", grade=1, s=1),
])
def test_matrix_unbounded(kwargs):
    with pytest.raises(UnboundedBlock):
        dump_matrix(**kwargs)


def test_list(capsys):
    code, out, _ = run(capsys, "list")
    assert code == 0 and "classical-lax" in out and "fock:H2scalar" in out
