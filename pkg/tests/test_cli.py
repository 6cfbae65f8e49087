import csv
import io
import json
import subprocess
import sys
import time

import pytest

from qmpicard.cli import CSV_COLUMNS, main


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_algebra_exit_codes(capsys):
    code, out = run(capsys, "algebra", "-a", "-1", "-b", "3")
    doc = json.loads(out)
    assert code == 0 and doc["discriminant"] == 6 and doc["ramified_primes"] == [2, 3]
    assert run(capsys, "algebra", "-a", "1", "-b", "1")[0] == 2
    assert run(capsys, "algebra", "-a", "-1", "-b", "-1")[0] == 3


def test_algebra_rational_input(capsys):
    code, out = run(capsys, "algebra", "-a", "-4/9", "-b", "3")
    assert code == 0 and json.loads(out)["discriminant"] == 6


def test_construct_defaults(capsys):
    code, out = run(capsys, "construct", "-a", "-1", "-b", "3")
    doc = json.loads(out)
    assert code == 0
    assert doc["elementary_divisors"] == [1, 1, 1, 1]
    assert doc["mu"] == "3i+j"
    assert doc["order"]["reduced_discriminant"] == 6
    units = {u["unit"]: u for u in doc["units"]}
    assert "2+j" in units and "2-j" in units
    assert units["-1"]["in_G"]["2"] is True
    assert units["2+j"]["in_G"]["2"] is False
    assert all(v for k, v in doc["checks"].items() if k != "polarization_expressions_agree")


def test_construct_non_maximal(capsys):
    code, out = run(capsys, "construct", "-a", "-1", "-b", "3", "--order", "1;i;j;ij", "--no-saturate")
    assert code == 5
    assert json.loads(out)["error"] == "NotUnimodular"


def test_construct_config_round_trip(capsys, tmp_path):
    _, first = run(capsys, "construct", "-a", "-1", "-b", "3", "--units-height", "1")
    cfg = tmp_path / "run.json"
    cfg.write_text(first)
    _, second = run(capsys, "construct", "--config", str(cfg))
    assert first == second


def test_construct_key_value_config(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("a = -1\nb = 3\nunits_height = 1\n")
    code, out = run(capsys, "construct", "--config", str(cfg))
    assert code == 0 and json.loads(out)["config"]["units_height"] == 1


def test_unknown_config_key(capsys, tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("a = -1\nb = 3\ncolour = red\n")
    assert run(capsys, "construct", "--config", str(cfg))[0] == 1


def test_fibers_single_tau_csv(capsys):
    code, out = run(capsys, "fibers", "-a", "-1", "-b", "3", "--tau", "0.3+1.2j", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0
    assert rows[0] == list(CSV_COLUMNS)
    assert len(rows) == 2 and rows[1][2] == "SmoothGenusTwo"


def test_fibers_omega_direct(capsys):
    code, out = run(capsys, "fibers", "--omega-direct", "diag:i,i", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0 and rows[1][2] == "TwoEllipticCurves"


def test_fibers_bad_tau_recorded_in_row(capsys):
    code, out = run(capsys, "fibers", "-a", "-1", "-b", "3", "--tau", "0.3+1.2j", "--tau", "0.1-1j")
    rows = json.loads(out)["rows"]
    assert code == 6
    assert rows[0]["class"] == "SmoothGenusTwo" and rows[1]["class"].startswith("Error:")


def test_fibers_deterministic_and_parallel(capsys):
    argv = ["fibers", "-a", "-1", "-b", "3", "--grid", "-0.5:0.5:3,0.6:1.5:2"]
    _, a = run(capsys, *argv)
    _, b = run(capsys, *argv)
    _, c = run(capsys, *argv, "--jobs", "2")
    assert a == b == c


def test_leray(capsys):
    code, out = run(capsys, "leray", "--ms", "3,2", "--h11", "5", "--extremal")
    doc = json.loads(out)
    assert code == 0
    assert doc["ranks"]["rank_L0L1"] == 4 and doc["verdict"] == {"rho": 5, "maximal": True, "rho_is_exact": True}
    assert run(capsys, "leray", "--ms", "3,2", "--h11", "3")[0] == 7


def test_full_grid_budget(capsys):
    start = time.perf_counter()
    code, out = run(capsys, "fibers", "-a", "-1", "-b", "3", "--format", "csv")
    assert code == 0 and len(out.strip().splitlines()) == 101
    assert time.perf_counter() - start < 60


def test_entry_point_module():
    proc = subprocess.run([sys.executable, "-m", "qmpicard", "algebra", "-a", "-1", "-b", "3"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and json.loads(proc.stdout)["discriminant"] == 6
