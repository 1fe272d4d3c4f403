import json
from pathlib import Path

import numpy as np
import pytest

from chtsim.cli import (
    EXIT_BLOWUP,
    EXIT_INVARIANT,
    EXIT_IO,
    EXIT_OK,
    EXIT_USAGE,
    main,
)
from chtsim.grid import read_snapshot


def write_config(tmp_path, extra="", body=None):
    text = body if body is not None else f"""
[grid]
dim = 2
extents = 1.0, 1.0
cells = 16, 16

[diffusion]
delta = 1.0
m = 1.5

[params]
chi = 5.0
xi = 1.0
mu = 1.0

[controls]
t_end = 0.2
sample_every = 0.02
cfl_diff = 0.9

[output]
dir = {tmp_path / "out"}
{extra}
"""
    path = tmp_path / "run.ini"
    path.write_text(text)
    return path


def test_run_constant_steady_exit_zero(tmp_path, capsys):
    cfg = write_config(tmp_path)
    code = main(["run", str(cfg)])
    assert code == EXIT_OK
    out = capsys.readouterr().out
    assert "[PASS] mass_bound" in out
    out_dir = tmp_path / "out"
    assert (out_dir / "trajectory.csv").exists()
    assert (out_dir / "invariants.json").exists()
    assert (out_dir / "config.ini").exists()
    u_final, g = read_snapshot(out_dir / "u_final.csv")
    assert np.max(np.abs(u_final - 1.0)) <= 1e-10
    report = json.loads((out_dir / "invariants.json").read_text())
    assert report["status"] == "completed"
    assert all(entry["pass"] for entry in report["checks"])


def test_run_blowup_exit_three(tmp_path):
    extra = """
[initial]
preset = gaussian_bump
amplitude = 2.0
width = 0.1
"""
    cfg = write_config(tmp_path, extra=extra)
    text = cfg.read_text().replace("[controls]", "[controls]\nblowup_threshold = 1.0")
    cfg.write_text(text)
    assert main(["run", str(cfg)]) == EXIT_BLOWUP


def test_run_missing_config_exit_io(tmp_path):
    assert main(["run", str(tmp_path / "nope.ini")]) == EXIT_IO


def test_run_invalid_config_exit_usage(tmp_path):
    path = tmp_path / "bad.ini"
    path.write_text("[grid]\ndim = 7\n")
    assert main(["run", str(path)]) == EXIT_USAGE


def test_trajectory_csv_deterministic(tmp_path):
    cfg = write_config(tmp_path)
    assert main(["run", str(cfg)]) == EXIT_OK
    first = (tmp_path / "out" / "trajectory.csv").read_bytes()
    assert main(["run", str(cfg)]) == EXIT_OK
    second = (tmp_path / "out" / "trajectory.csv").read_bytes()
    assert first == second


def test_sweep_m_singleton_usage_error(tmp_path):
    cfg = write_config(tmp_path)
    assert main(["sweep-m", str(cfg), "--values", "1.5"]) == EXIT_USAGE


def test_sweep_m_runs_members(tmp_path, monkeypatch):
    monkeypatch.setenv("CHTSIM_WORKERS", "1")
    cfg = write_config(tmp_path)
    code = main(["sweep-m", str(cfg), "--values", "1.2", "1.5"])
    assert code == EXIT_OK
    summary = (tmp_path / "out" / "sweep_m" / "summary.csv").read_text().splitlines()
    assert summary[0].startswith("m,status")
    assert len(summary) == 3
    assert (tmp_path / "out" / "sweep_m" / "m_1.2" / "invariants.json").exists()
    assert (tmp_path / "out" / "sweep_m" / "m_1.5" / "trajectory.csv").exists()


def test_sweep_eps_too_short_usage_error(tmp_path):
    cfg = write_config(tmp_path)
    assert main(["sweep-eps", str(cfg), "--values", "0.1", "0.01"]) == EXIT_USAGE


def test_sweep_eps_report_and_layout(tmp_path, monkeypatch):
    monkeypatch.setenv("CHTSIM_WORKERS", "1")
    extra = """
[initial]
preset = gaussian_bump
amplitude = 1.5
width = 0.12
center = 0.4
"""
    cfg = write_config(tmp_path, extra=extra)
    text = cfg.read_text().replace("m = 1.5", "m = 2.0")
    cfg.write_text(text)
    code = main(["sweep-eps", str(cfg), "--values", "0.1", "0.01", "0.001"])
    assert code == EXIT_OK
    sweep_dir = tmp_path / "out" / "sweep"
    report = json.loads((sweep_dir / "sweep_report.json").read_text())
    assert report["epsilons"] == [0.1, 0.01, 0.001]
    assert len(report["pairwise_l2_distances"]) == 2
    assert report["cauchy_pass"] is True
    for eps in ("0.1", "0.01", "0.001"):
        assert (sweep_dir / eps / "trajectory.csv").exists()
    assert (sweep_dir / "summary.csv").exists()


def test_verify_passes(tmp_path, capsys):
    cfg = write_config(tmp_path)
    assert main(["verify", str(cfg)]) == EXIT_OK
    out = capsys.readouterr().out
    assert "[PASS] steady_state_fixed_point" in out
    assert "[PASS] operator_conservation" in out
    assert "[PASS] helmholtz_cg_vs_spectral" in out
    assert "[PASS] helmholtz_eigenpair" in out


def test_regime_warning_on_stderr(tmp_path, capsys):
    body = f"""
[grid]
dim = 2
extents = 1.0, 1.0
cells = 8, 8

[analysis]
n = 3

[diffusion]
delta = 1.0
m = 1.3

[params]
chi = 1.0
xi = 1.0
mu = 1.0

[controls]
t_end = 0.05
sample_every = 0.01

[output]
dir = {tmp_path / "out"}
"""
    cfg = write_config(tmp_path, body=body)
    code = main(["run", str(cfg)])
    assert code == EXIT_OK  # out-of-regime is a warning, not an error
    assert "not above the boundedness threshold" in capsys.readouterr().err
