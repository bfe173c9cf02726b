import json
import subprocess
import sys
from pathlib import Path

import pytest

from ramify.cli import run
from ramify.report import body_of

SPECS = Path(__file__).resolve().parents[1] / "specs"


def call(args, capsys):
    code = run(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_report_sqrt2(capsys):
    code, out, _ = call(["report", str(SPECS / "sqrt2.json")], capsys)
    doc = json.loads(out)
    assert code == 0
    assert doc["u"] == "3/1" and doc["c"] == "3/1"
    assert doc["herbrand"]["knots"] == [["3/2", "3/1"]]


def test_report_zeta8_upper_breaks(capsys):
    code, out, _ = call(["report", str(SPECS / "zeta8.json")], capsys)
    assert code == 0
    assert json.loads(out)["upper_breaks"] == ["2/1", "2/1", "3/1"]


def test_report_is_byte_stable(capsys):
    a = call(["report", "zeta4"], capsys)[1]
    b = call(["report", "zeta4"], capsys)[1]
    da, db = json.loads(a), json.loads(b)
    assert da["stability_hash"] == db["stability_hash"]
    assert json.dumps(body_of(da)) == json.dumps(body_of(db))


def test_malformed_steps_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"base": {"kind": "padic", "p": 2}, "steps": [{"type": "eisenstein"}]}))
    code, _, err = call(["report", str(bad)], capsys)
    assert code == 2 and "/steps/0" in err


def test_not_json_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{nope")
    assert call(["report", str(bad)], capsys)[0] == 2


def test_not_galois_exit_3(tmp_path, capsys):
    f = tmp_path / "cube.json"
    f.write_text(json.dumps({"base": {"kind": "padic", "p": 2},
                             "steps": [{"type": "eisenstein", "coeffs": ["2", "0", "0", "1"]}]}))
    assert call(["report", str(f)], capsys)[0] == 3


def test_pm_scan_sqrt2(capsys):
    code, out, _ = call(["pm-scan", str(SPECS / "sqrt2.json"), "--m-grid", "4", "--catalog", "tame:4"], capsys)
    doc = json.loads(out)["pm_scan"]
    assert code == 0
    assert doc["m_lower_bound"] == "11/4" and doc["window"]["passes"]


def test_pm_scan_unramified(capsys):
    code, out, _ = call(["pm-scan", str(SPECS / "unramified2.json")], capsys)
    doc = json.loads(out)["pm_scan"]
    assert code == 0 and doc["m_lower_bound"] is None and doc["m_verdict"] == "m <= 0"
    assert all(r["verdict"] == "true" for r in doc["table"])


def test_pm_scan_tame(capsys):
    code, out, _ = call(["pm-scan", str(SPECS / "tame3.json")], capsys)
    doc = json.loads(out)["pm_scan"]
    row = next(r for r in doc["table"] if r["m"] == "1/1")
    assert code == 0 and doc["m_lower_bound"] == "1/1"
    assert row["verdict"] == "counterexample" and row["field"] == "K"


def test_pm_scan_brute_small(capsys):
    code, out, _ = call(["pm-scan", "tamesq", "--brute", "--catalog", "tame:2,perturb:2", "--m-grid", "2"],
                        capsys)
    assert code == 0
    assert json.loads(out)["pm_scan"]["brute"]


def test_catalog_listing(capsys):
    code, out, _ = call(["catalog"], capsys)
    assert code == 0 and len(out.strip().splitlines()) >= 8
    code, out, _ = call(["catalog", "--json"], capsys)
    entries = json.loads(out)["entries"]
    assert len(entries) >= 8 and all("/" in e["expected"]["u"] for e in entries)


def test_catalog_for_one_spec(capsys):
    code, out, _ = call(["catalog", "sqrt2", "--json"], capsys)
    assert code == 0 and json.loads(out)["fields"][0]["name"] == "K"


def test_tsv_and_serre(capsys):
    code, out, _ = call(["report", "sqrt2", "--tsv"], capsys)
    assert out.splitlines() == ["x\tf(x)", "0/1\t0/1", "3/2\t3/1"]
    code, out, _ = call(["report", "zeta8", "--serre-convention"], capsys)
    assert json.loads(out)["serre_convention"]["upper"] == ["1/1", "1/1", "2/1"]


def test_lattice_command(capsys):
    code, out, _ = call(["lattice", "zeta8"], capsys)
    doc = json.loads(out)
    assert code == 0 and len(doc["lattice"]) == 5


def test_env_precision(monkeypatch, capsys):
    monkeypatch.setenv("RAMIFY_PRECISION", "48")
    from ramify.config import env_precision
    assert env_precision() == 48
    code, out, _ = call(["report", "zeta4"], capsys)
    assert code == 0
    monkeypatch.setenv("RAMIFY_PRECISION", "lots")
    assert call(["report", "zeta4"], capsys)[0] == 2


def test_bad_catalog_knob(capsys):
    assert call(["pm-scan", "sqrt2", "--catalog", "wild:3"], capsys)[0] == 2


def test_console_script_runs():
    r = subprocess.run([sys.executable, "-m", "ramify.cli", "catalog"], capture_output=True, text=True)
    assert r.returncode == 0 and "sqrt2" in r.stdout


def test_output_file(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert call(["report", "sqrt2", "-o", str(out)], capsys)[0] == 0
    assert json.loads(out.read_text())["u"] == "3/1"
