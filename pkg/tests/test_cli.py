"""CLI smoke tests."""

import json

import pytest

from noma_bc.cli import main


def test_simulate_writes_artifact(tmp_path, capsys):
    rc = main(["simulate", "--scenario", "power", "--trials", "1",
               "--out", str(tmp_path)])
    assert rc == 0
    printed = capsys.readouterr().out.strip()
    assert printed.endswith("power.csv")
    assert (tmp_path / "power.csv").exists()
    assert (tmp_path / "config_echo.json").exists()


def test_simulate_honours_config_file_and_seed(tmp_path):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps({"p_tot_dbm": 20.0, "num_cells": 2}))
    rc = main(["simulate", "--scenario", "convergence", "--trials", "1",
               "--config", str(cfg_path), "--seed", "42",
               "--out", str(tmp_path / "out")])
    assert rc == 0
    echo = json.loads((tmp_path / "out" / "config_echo.json").read_text())
    assert echo["config"]["p_tot_dbm"] == 20.0
    assert echo["config"]["p_tot_mw"] == 100.0
    assert echo["config"]["rng_seed"] == 42


def test_simulate_rejects_negative_seed(tmp_path):
    with pytest.raises(SystemExit):
        main(["simulate", "--scenario", "power", "--trials", "1",
              "--seed", "-3", "--out", str(tmp_path)])


def test_unknown_scenario_rejected(tmp_path):
    with pytest.raises(SystemExit):
        main(["simulate", "--scenario", "bogus", "--out", str(tmp_path)])


def test_verify_quick_calculus(capsys):
    rc = main(["verify", "--suite", "calculus", "--quick"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "[PASS]" in out
    assert "[FAIL]" not in out
