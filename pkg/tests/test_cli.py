import json
import subprocess
import sys

import numpy as np
import pytest

from wignerbet.config import ExperimentConfig

SMALL = ["--x-min", "-12", "--x-max", "12", "--n-points", "128"]


def run_cli(*args):
    return subprocess.run(
        [sys.executable, "-m", "wignerbet.cli", *args],
        capture_output=True, text=True,
    )


def test_config_roundtrip():
    cfg = ExperimentConfig(n_points=256, skeptic_c=7.5, states="fock:0;fock:1",
                           reality="shifted:4.5")
    assert ExperimentConfig.from_ini(cfg.to_ini()) == cfg


def test_config_rejects_unknown_key():
    from wignerbet.errors import ConfigurationError

    with pytest.raises(ConfigurationError):
        ExperimentConfig.from_ini("[grid]\nx_typo = 3\n")


def test_direction_list_rejects_degenerate():
    from wignerbet.errors import ConfigurationError

    cfg = ExperimentConfig(directions="1,0;0,0")
    with pytest.raises(ConfigurationError):
        cfg.direction_list()


def test_cmd_state_fock1_zero_at_origin(tmp_path):
    out = run_cli("state", "--state", "fock:1", *SMALL, "--out", str(tmp_path))
    assert out.returncode == 0
    assert "norm 1.000000" in out.stdout
    rows = (tmp_path / "state.csv").read_text().splitlines()
    assert rows[0] == "x,re_psi,im_psi"
    values = {float(r.split(",")[0]): complex(float(r.split(",")[1]), float(r.split(",")[2]))
              for r in rows[1:]}
    assert abs(values[0.0]) < 1e-12


def test_cmd_state_unknown_fixture_exits_2(tmp_path):
    out = run_cli("state", "--state", "mystery:1", *SMALL, "--out", str(tmp_path))
    assert out.returncode == 2
    assert "error" in out.stderr


def test_cmd_wigner_ground_state_summary(tmp_path):
    out = run_cli("wigner", "--state", "fock:0", *SMALL, "--out", str(tmp_path))
    assert out.returncode == 0
    summary = json.loads((tmp_path / "wigner_summary.json").read_text())
    assert abs(summary["mass"] - 1.0) < 1e-6
    assert summary["negative_volume"] < 1e-8
    assert summary["w_at_origin"] > 0


def test_cmd_wigner_first_excited_negative_origin(tmp_path):
    out = run_cli("wigner", "--state", "fock:1", *SMALL, "--out", str(tmp_path))
    assert out.returncode == 0
    summary = json.loads((tmp_path / "wigner_summary.json").read_text())
    assert summary["w_at_origin"] < 0
    assert summary["negative_volume"] > 0.05


def test_cmd_quadrature_writes_normalized_density(tmp_path):
    out = run_cli("quadrature", "--state", "gauss:0,0,1", "--a", "0.6", "--b", "0.8",
                  *SMALL, "--out", str(tmp_path))
    assert out.returncode == 0
    rows = (tmp_path / "quadrature.csv").read_text().splitlines()
    assert rows[0] == "z,density"
    data = np.array([[float(v) for v in r.split(",")] for r in rows[1:]])
    dz = data[1, 0] - data[0, 0]
    assert abs(dz * data[:, 1].sum() - 1.0) < 1e-6


def test_cmd_verify_passes_on_small_sweep(tmp_path):
    # the 1e-3 agreement needs adequate resolution: cell footprints bias the
    # pushforward quadratically in dx
    out = run_cli("verify", "--states", "gauss:0,0,1;fock:1",
                  "--directions", "auto:4", "--x-min", "-12", "--x-max", "12",
                  "--n-points", "512", "--out", str(tmp_path))
    assert out.returncode == 0, out.stdout + out.stderr
    assert "verify: ok" in out.stdout
    report = (tmp_path / "verify_report.txt").read_text()
    assert report.count(" ok") == 8


def test_cmd_verify_degenerate_direction_exits_2(tmp_path):
    out = run_cli("verify", "--states", "fock:0", "--directions", "1,0;0,0",
                  *SMALL, "--out", str(tmp_path))
    assert out.returncode == 2


def test_cmd_protocol_outputs_and_determinism(tmp_path):
    args = ["protocol", "--protocol", "1", "--rounds", "10", "--runs", "2",
            "--seed", "77", "--states", "gauss:0,0,1;fock:1",
            "--directions", "auto:2", "--skeptic", "lln", "--skeptic-f", "z",
            "--skeptic-c", "15", *SMALL]
    out1 = run_cli(*args, "--out", str(tmp_path / "a"))
    assert out1.returncode == 0, out1.stderr
    out2 = run_cli(*args, "--out", str(tmp_path / "b"))
    assert out2.returncode == 0

    for name in ("transcript.jsonl", "summary.json", "discrepancy.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()

    lines = (tmp_path / "a" / "transcript.jsonl").read_text().splitlines()
    assert len(lines) == 20
    record = json.loads(lines[0])
    assert {"n", "state_spec", "forecast_hash", "a", "b", "bet_descriptor",
            "r", "log_capital", "run"} <= set(record)


def test_cmd_protocol_2_runs(tmp_path):
    out = run_cli("protocol", "--protocol", "2", "--rounds", "6", "--runs", "1",
                  "--seed", "3", "--states", "fock:1", "--directions", "1,1",
                  "--skeptic", "unit", *SMALL, "--out", str(tmp_path))
    assert out.returncode == 0, out.stderr
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert summary["final_log_capital"] == [0.0]
    lines = (tmp_path / "transcript.jsonl").read_text().splitlines()
    first = json.loads(lines[0])
    assert first["commit_event"] < first["quad_event"]
