from __future__ import annotations

import json
import subprocess
import sys

import pytest

from adgraphs.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_pp_test_output(capsys):
    code, out, _ = run(capsys, "pp", "test", "--poly", "x^3", "--q", "7")
    assert code == 0
    assert json.loads(out) == {"pp": False, "valueset": 3}


def test_pp_methods_agree(capsys):
    code, out, _ = run(capsys, "pp", "test", "--poly", "x^5+x", "--q", "7", "--method", "both")
    doc = json.loads(out)
    assert code == 0 and doc["hermite_dickson"] == doc["bruteforce"]


def test_valueset_plain(capsys):
    code, out, _ = run(capsys, "pp", "valueset", "--poly", "x^2", "--q", "7", "--format", "plain")
    assert code == 0 and out.split() == ["0", "1", "2", "4"]


def test_census_csv(capsys):
    code, out, _ = run(capsys, "graph", "census", "--spec", "R", "--q", "7", "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 99
    assert "line,0,1,202" in lines


def test_distance(capsys):
    code, out, _ = run(capsys, "graph", "distance", "--spec", "R", "--q", "7",
                       "--from", "[3,4,1]", "--to", "[3,4,5]")
    assert code == 0 and json.loads(out)["distance"] == 6


def test_aut_order(capsys):
    code, out, _ = run(capsys, "aut", "order", "--spec", "R", "--q", "7")
    doc = json.loads(out)
    assert code == 0 and doc["order"] == "7" and doc["translation_only"] is True


def test_iso_with_witness(capsys):
    code, out, _ = run(capsys, "iso", "--spec", "q=5;f=p1*l1;g=p2*l1",
                       "--other", "q=5;f=p1*l1;g=p1*l1^2", "--witness")
    doc = json.loads(out)
    assert code == 0 and doc["isomorphic"] and len(doc["witness"]) == 250


def test_verify_exit_codes(capsys):
    code, out, _ = run(capsys, "verify", "prop3.1", "--q", "7", "--workers", "1")
    assert code == 0 and json.loads(out)["status"] == "pass"
    code, out, _ = run(capsys, "verify", "prop3.1", "diam", "--q", "7,8", "--workers", "1")
    assert code == 0 and len(json.loads(out)) == 4


@pytest.mark.parametrize("argv", [
    ["graph", "stats", "--spec", "q=7;f=p1*zz"],
    ["graph", "distance", "--spec", "R", "--q", "7", "--from", "{1,2,3}", "--to", "[0,0,0]"],
    ["frobnicate"],
    ["verify", "nope", "--q", "7"],
    ["pp", "test", "--poly", "x^3", "--q", "4"],
])
def test_usage_errors(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_seed_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("ADGRAPHS_SEED", "5")
    _, out, _ = run(capsys, "verify", "eq2.path", "--q", "7", "--samples", "10", "--workers", "1")
    assert json.loads(out)["seed"] == 5


def test_cache_round_trip(capsys, tmp_path):
    argv = ["graph", "census", "--spec", "R", "--q", "5", "--cache-dir", str(tmp_path), "--format", "csv"]
    _, first, _ = run(capsys, *argv)
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert len(manifest) == 1
    _, second, _ = run(capsys, *argv)
    assert first == second
    argv[3] = "GQ"
    _, third, _ = run(capsys, *argv)
    assert third != first
    assert len(json.loads((tmp_path / "manifest.json").read_text())) == 2


def test_corrupt_cache_entry_is_recomputed(capsys, tmp_path, caplog):
    argv = ["graph", "census", "--spec", "R", "--q", "5", "--cache-dir", str(tmp_path), "--format", "csv"]
    _, first, _ = run(capsys, *argv)
    (digest,) = json.loads((tmp_path / "manifest.json").read_text())
    (tmp_path / digest).write_text("garbage")
    _, again, _ = run(capsys, *argv)
    assert again == first
    assert "corrupt" in caplog.text


def test_console_script_entry():
    out = subprocess.run([sys.executable, "-m", "adgraphs.cli", "pp", "test", "--poly", "x", "--q", "5"],
                         capture_output=True, text=True, check=True)
    assert json.loads(out.stdout) == {"pp": True, "valueset": 5}
