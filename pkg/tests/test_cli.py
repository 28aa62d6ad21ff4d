import json
import subprocess
import sys

import pytest

from thzauth.cli import main

FAST = ["--realizations", "3", "--snr-db", "0", "10"]


def test_pathloss_stdout(capsys):
    assert main(["pathloss", "--frequency-hz", "1e12", "--distance-m", "0.5"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0].startswith("frequency_hz,") and len(out) == 2


def test_error_vs_snr_file_and_determinism(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["error-vs-snr", *FAST, "--seed", "3", "--out", str(a)]) == 0
    assert main(["error-vs-snr", *FAST, "--seed", "3", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert a.read_text().startswith("sweep,metric,estimate,stderr,n\n")


def test_roc_writes_one_file_per_snr(tmp_path):
    out = tmp_path / "roc.csv"
    assert main(["roc", *FAST, "--pfa", "0.1", "0.5", "-m", "4", "--out", str(out)]) == 0
    assert (tmp_path / "roc_snr0.csv").exists() and (tmp_path / "roc_snr10.csv").exists()


def test_config_file_and_overrides(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"realizations": 2, "slots": 50, "snr_db": [5]}))
    assert main(["error-vs-snr", "--config", str(cfg), "--pfa", "0.3"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 6 and all(line.startswith("5,") for line in lines[1:])


def test_exit_codes(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"alpha": 3}))
    assert main(["error-vs-snr", "--config", str(bad)]) == 2
    assert main(["error-vs-snr", "--config", str(tmp_path / "missing.json")]) == 3
    assert main(["error-vs-snr", *FAST, "--pfa", "1.5"]) == 2
    from importlib import resources

    table = resources.files("thzauth") / "data" / "k_table_285K_1atm.csv"
    assert main(["pathloss", "--frequency-hz", "5e12", "--absorption", str(table)]) == 2  # outside coverage
    capsys.readouterr()


def test_io_error_on_unwritable_output(tmp_path):
    assert main(["pathloss", "--out", str(tmp_path / "no" / "dir" / "x.csv")]) == 3


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "thzauth", "--help"], capture_output=True, text=True)
    assert r.returncode == 0 and "hmm-compare" in r.stdout
    r = subprocess.run([sys.executable, "-m", "thzauth", "nope"], capture_output=True, text=True)
    assert r.returncode == 2
