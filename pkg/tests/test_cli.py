import json
import os
import subprocess
import sys

import pytest

from weilcert.cli import COMMANDS, dispatch, load_schema
from conftest import data_path


def run(tmp_path, *argv):
    out = tmp_path / "report.json"
    code = dispatch(list(argv) + ["--out", str(out)])
    payload = json.loads(out.read_text()) if out.exists() else None
    return code, payload


def test_every_command_has_a_schema():
    for cmd in COMMANDS:
        assert load_schema(cmd)["type"] == "object"


def test_field(tmp_path):
    code, rep = run(tmp_path, "field", "--p", "3", "--k", "4")
    assert code == 0
    assert rep["q"] == 81 and rep["command"] == "field"


def test_count_matches_library(tmp_path, elliptic_f5):
    from weilcert.curve import count_points
    code, rep = run(tmp_path, "count", "--curve", data_path("elliptic_f5.json"), "--jmax", "3")
    assert code == 0
    assert [c["N"] for c in rep["counts"]] == [count_points(elliptic_f5, j) for j in (1, 2, 3)]


def test_zeta_with_figures(tmp_path):
    figs = tmp_path / "figs"
    code, rep = run(tmp_path, "zeta", "--curve", data_path("elliptic_f5.json"), "--jmax", "4",
                    "--figures", str(figs))
    assert code == 0
    assert rep["genus"] == 1
    assert all(c["match"] for c in rep["checks"])
    assert rep["figures"] and all(os.path.getsize(p) > 0 for p in rep["figures"])


def test_jacobian(tmp_path):
    code, rep = run(tmp_path, "jacobian", "--curve", data_path("elliptic_f5.json"))
    assert code == 0
    assert rep["size"] == 9


def test_symplectic_count_and_proportion(tmp_path):
    code, rep = run(tmp_path, "symplectic", "count", "--ell", "5")
    assert code == 0
    assert rep["group_order"] == 120 and rep["in_bracket"]
    code, rep = run(tmp_path, "symplectic", "proportion", "--ell", "7", "--f", "1,5,1",
                    "--samples", "2000")
    assert code == 0 and rep["proportion"]["within_bound"]


def test_simulate_gcd(tmp_path):
    code, rep = run(tmp_path, "simulate-gcd", "--beta1", "2", "--g", "2", "--ell", "127",
                    "--Q", "121", "--trials", "50")
    assert code == 0
    assert rep["trials"] == 50


def test_usage_and_budget_errors(tmp_path, capsys):
    assert dispatch(["count"]) == 2                                   # missing --curve
    assert dispatch(["count", "--curve", str(tmp_path / "missing.json")]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert dispatch(["zeta", "--curve", str(bad)]) == 2
    assert dispatch(["count", "--curve", data_path("klein_quartic_f5.json"), "--j", "9",
                     "--budget-points", "1000"]) == 2
    assert dispatch(["field", "--p", "9"]) == 1                       # NonPrime
    capsys.readouterr()


def test_certify_rejects_wrong_claim(tmp_path):
    transcript = tmp_path / "t.jsonl"
    code, rep = run(tmp_path, "certify", "--curve", data_path("elliptic_f2.json"),
                    "--claimed-p1", data_path("elliptic_f2_wrong_p1.json"),
                    "--transcript", str(transcript))
    assert code == 1
    assert not rep["verdict"]["accepted"]
    lines = transcript.read_text().splitlines()
    assert all(json.loads(line)["type"] in ("challenge", "response", "verdict") for line in lines)


def test_console_script_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "weilcert.cli", "field", "--p", "5", "--json"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["q"] == 5
