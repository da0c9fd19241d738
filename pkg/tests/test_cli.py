"""CLI surface: outputs, exit codes, determinism."""

import json

import pytest

from qlrc.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_params_qtb_example(capsys):
    code, out, _ = run(capsys, "params", "--family", "qtb", "--q", "13",
                       "--r", "3", "--ell", "8")
    assert code == 0
    d = json.loads(out)
    assert (d["n"], d["k"]) == (12, 2)
    assert abs(d["d_lower"] - 2.254) < 1e-3
    assert abs(d["d_upper"] - 8.333) < 1e-3
    assert d["e"] == 0
    assert d["singleton_partition_cap_d"] == 4


def test_params_fqtb_includes_eps_and_uncertainty(capsys):
    code, out, _ = run(capsys, "params", "--family", "fqtb", "--q", "13",
                       "--r", "3", "--ell", "8", "--s", "2")
    assert code == 0
    d = json.loads(out)
    assert abs(d["eps"] - 10 / 36) < 1e-12
    assert d["uncertainty"] is True


def test_params_invalid_fold_exits_2(capsys):
    code, _, err = run(capsys, "params", "--family", "fqtb", "--q", "13",
                       "--r", "3", "--ell", "8", "--s", "3")
    assert code == 2
    assert "divide" in err


def test_distance_qtb734(capsys):
    code, out, _ = run(capsys, "distance", "--family", "qtb", "--q", "7",
                       "--r", "3", "--ell", "4", "--brute")
    assert code == 0
    assert json.loads(out)["distance"] == 2


def test_distance_rs_small(capsys):
    code, out, _ = run(capsys, "distance", "--family", "rs", "--q", "7", "--ell", "4")
    assert code == 0
    assert json.loads(out)["distance"] == 3


def test_distance_cap_exit_3(capsys):
    code, _, err = run(capsys, "distance", "--family", "qtb", "--q", "127",
                       "--r", "3", "--ell", "80", "--cap", "1000")
    assert code == 3
    assert "cap" in err


def test_simulate_local_model_all_success(capsys):
    code, out, _ = run(capsys, "simulate", "--family", "qtb", "--q", "13",
                       "--r", "3", "--ell", "8", "--model", "local",
                       "--trials", "40", "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("family,")
    row = lines[1].split(",")
    assert row[0] == "qtb" and int(row[8]) == 40


def test_simulate_deterministic_output(capsys):
    args = ("simulate", "--family", "qtb", "--q", "13", "--r", "3", "--ell", "8",
            "--model", "erasure", "--weight", "1", "--trials", "25",
            "--seed", "9", "--format", "csv", "--per-trial")
    _, out1, _ = run(capsys, *args)
    _, out2, _ = run(capsys, *args)
    assert out1 == out2
    assert all(line.endswith(",1") for line in out1.strip().splitlines()[1:])


def test_simulate_overload_requires_flag(capsys):
    code, _, err = run(capsys, "simulate", "--family", "qtb", "--q", "13",
                       "--r", "3", "--ell", "8", "--model", "mixed",
                       "--weight", "3", "--trials", "2")
    assert code == 2
    assert "overload" in err


def test_simulate_overload_reports_failures_exit_zero(capsys):
    code, out, _ = run(capsys, "simulate", "--family", "qtb", "--q", "13",
                       "--r", "3", "--ell", "8", "--model", "mixed",
                       "--weight", "4", "--trials", "5", "--allow-overload",
                       "--format", "csv")
    assert code == 0
    row = out.strip().splitlines()[1].split(",")
    assert int(row[7]) == 5  # trials ran; successes may be anything


def test_bounds_table_rows(capsys):
    code, out, _ = run(capsys, "bounds-table", "--q", "13,127", "--r", "3",
                       "--ell", "8,80", "--s", "2")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].split(",")[:4] == ["family", "q", "r", "ell"]
    assert any(line.startswith("qtb,127,3,80") for line in lines)
    assert any(line.startswith("fqtb,13,3,8,2") for line in lines)


def test_construct_roundtrip(tmp_path, capsys):
    path = tmp_path / "code.json"
    code, _, _ = run(capsys, "construct", "--family", "qtb", "--q", "13",
                     "--r", "3", "--ell", "8", "--out", str(path))
    assert code == 0
    desc = json.loads(path.read_text())
    assert desc["family"] == "qtb" and desc["k"] == 2
    code, out, _ = run(capsys, "params", "--descriptor", str(path))
    assert code == 0
    assert json.loads(out)["k"] == 2


def test_ensemble_gv(capsys):
    code, out, _ = run(capsys, "ensemble", "--kind", "gv", "--n", "9", "--r", "3",
                       "--ell", "1", "--q", "4", "--trials", "8", "--seed", "4")
    assert code == 0
    d = json.loads(out)
    assert d["trials"] == 8 and 0 <= d["frequency"] <= 1


def test_missing_family_exit_2(capsys):
    code, _, err = run(capsys, "params")
    assert code == 2
