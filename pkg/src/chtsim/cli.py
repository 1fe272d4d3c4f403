"""Command-line harness: single runs, parameter sweeps and self-verification.

Exit codes: 0 success, 2 invariant failure, 3 suspected blow-up, 4 solver
failure, 5 I/O error, 64 usage or configuration error. Sweep members run in
parallel worker processes; set CHTSIM_WORKERS to cap the worker count.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path

import numpy as np

from .config import ConfigError, RunConfig, build_initial_data, parse_config, serialize_config
from .degenerate import epsilon_sweep
from .grid import write_snapshot
from .model import DiffusionSpec, eval_diffusion, validate_regime
from .monitor import Verdict, compute_K, evaluate_invariants, make_monitor_hooks, mass_star
from .operators import diffusion_divergence, laplacian, taxis_divergence
from .stepper import HelmholtzDirect, RunStatus, advance, solve_helmholtz

EXIT_OK = 0
EXIT_INVARIANT = 2
EXIT_BLOWUP = 3
EXIT_SOLVER = 4
EXIT_IO = 5
EXIT_USAGE = 64

WORKERS_ENV = "CHTSIM_WORKERS"

_STATUS_EXIT = {
    RunStatus.COMPLETED: EXIT_OK,
    RunStatus.BLOWUP_SUSPECTED: EXIT_BLOWUP,
    RunStatus.SOLVER_FAILURE: EXIT_SOLVER,
}

_FLAG_COLUMNS = (
    ("u_nonneg", "min_u", lambda x, traj: x >= 0.0),
    ("v_nonneg", "min_v", lambda x, traj: x >= 0.0),
    ("w_positive", "min_w", lambda x, traj: x > 0.0),
    ("w_monotone", "w_monotone_violation", lambda x, traj: x <= 0.0),
    ("w_bounded", "linf_w", lambda x, traj: x <= traj.w0_linf),
)


def _worker_count(n_jobs: int) -> int:
    env = os.environ.get(WORKERS_ENV, "").strip()
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigError(f"{WORKERS_ENV} must be an integer, got {env!r}") from None
    return min(n_jobs, os.cpu_count() or 1)


def write_trajectory_csv(traj, path: Path) -> None:
    base = ["t", "dt", "mass", "linf_u", "linf_v", "linf_w", "l2_gradv",
            "min_u", "min_v", "min_w", "w_monotone_violation"]
    extra = sorted(k for k in traj.series if k not in base and k != "t")
    flags = [name for name, _, _ in _FLAG_COLUMNS]
    lines = [",".join(base + extra + flags)]
    for i, t in enumerate(traj.times):
        row = [repr(float(t))]
        row += [repr(float(traj.series[k][i])) for k in base[1:]]
        row += [repr(float(traj.series[k][i])) for k in extra]
        for _, src, pred in _FLAG_COLUMNS:
            row.append(str(int(pred(traj.series[src][i], traj))))
        lines.append(",".join(row))
    path.write_text("\n".join(lines) + "\n")


def execute_run(cfg: RunConfig, out_dir: Path, store_snapshots: bool = False):
    """Run one configuration, write its artifacts, return (exit_code, summary)."""
    out_dir.mkdir(parents=True, exist_ok=True)
    init, echo = build_initial_data(cfg.preset, cfg.grid)
    m_star = mass_star(init.u0, cfg.grid)
    big_k = compute_K(init.w0, cfg.grid)
    hooks = make_monitor_hooks(cfg.monitor, init.w0, cfg.grid)
    traj = advance(init, cfg.params, cfg.diffusion, cfg.controls, cfg.grid,
                   hooks=hooks, store_snapshots=store_snapshots)
    entries = evaluate_invariants(traj, cfg.params, m_star, big_k, cfg.monitor)
    all_pass = all(e.passed for e in entries)
    code = _STATUS_EXIT[traj.status]
    if code == EXIT_OK and not all_pass:
        code = EXIT_INVARIANT

    write_trajectory_csv(traj, out_dir / "trajectory.csv")
    for name, fieldv in (("u", traj.final.u), ("v", traj.final.v), ("w", traj.final.w)):
        write_snapshot(out_dir / f"{name}_final.csv", fieldv, cfg.grid)
    (out_dir / "config.ini").write_text(serialize_config(cfg))
    report = {
        "status": traj.status.value,
        "message": traj.message,
        "exit_code": code,
        "t_final": float(traj.final.t),
        "m_star": m_star,
        "K": big_k,
        "regime_warning": cfg.regime_warning,
        "initial_data": echo,
        "checks": [e.to_json_dict() for e in entries],
    }
    (out_dir / "invariants.json").write_text(json.dumps(report, indent=2) + "\n")

    verdicts = {
        e.name: e.details["verdict"].value
        for e in entries
        if "verdict" in e.details
    }
    summary = {
        "status": traj.status.value,
        "exit_code": code,
        "all_invariants_pass": all_pass,
        "max_linf_u": float(np.max(traj.series["linf_u"])),
        "max_linf_v": float(np.max(traj.series["linf_v"])),
        "verdicts": verdicts,
    }
    return code, summary, traj


def _print_checks(summary: dict, out_dir: Path) -> None:
    report = json.loads((out_dir / "invariants.json").read_text())
    for entry in report["checks"]:
        mark = "PASS" if entry["pass"] else "FAIL"
        print(f"[{mark}] {entry['check']}: worst_slack={entry['worst_slack']:.6g} "
              f"at t={entry['t_worst']:.6g}")
    print(f"status: {report['status']} ({report['message']}); exit {report['exit_code']}")


def cmd_run(args) -> int:
    cfg = _load_config(args.config)
    if cfg.regime_warning:
        print(f"warning: {cfg.regime_warning}", file=sys.stderr)
    out_dir = Path(cfg.output_dir)
    code, summary, _ = execute_run(cfg, out_dir, store_snapshots=args.snapshots)
    _print_checks(summary, out_dir)
    return code


def _member_worker(job):
    text, out_dir = job
    try:
        cfg = parse_config(text)
        code, summary, _ = execute_run(cfg, Path(out_dir))
        return {"exit_code": code, **summary}
    except Exception as exc:  # member failures must not kill the sweep
        return {"exit_code": EXIT_SOLVER, "status": "error", "error": str(exc)}


def _run_members(jobs):
    workers = _worker_count(len(jobs))
    if workers <= 1:
        return [_member_worker(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_member_worker, jobs))


def cmd_sweep_m(args) -> int:
    cfg = _load_config(args.config)
    values = list(args.values)
    if len(values) < 2:
        print("error: sweep requires at least 2 values", file=sys.stderr)
        return EXIT_USAGE
    base_out = Path(cfg.output_dir) / "sweep_m"
    jobs = []
    for m in values:
        try:
            member = replace(
                cfg,
                diffusion=DiffusionSpec(
                    delta=cfg.diffusion.delta, m=m,
                    offset=cfg.diffusion.offset, epsilon=cfg.diffusion.epsilon,
                ),
                output_dir=str(base_out / f"m_{m:g}"),
            )
        except ValueError as exc:
            print(f"error: m={m}: {exc}", file=sys.stderr)
            return EXIT_USAGE
        jobs.append((serialize_config(member), member.output_dir))
    results = _run_members(jobs)
    base_out.mkdir(parents=True, exist_ok=True)
    lines = ["m,status,exit_code,within_regime,max_linf_u,bounded_linf_u,all_invariants_pass"]
    for m, res in zip(values, results):
        regime = validate_regime(
            DiffusionSpec(delta=cfg.diffusion.delta, m=m), cfg.analysis_n
        ).within_theorem
        lines.append(
            f"{m:g},{res.get('status')},{res['exit_code']},{int(regime)},"
            f"{res.get('max_linf_u', float('nan')):.12g},"
            f"{res.get('verdicts', {}).get('bounded_linf_u', 'n/a')},"
            f"{int(bool(res.get('all_invariants_pass', False)))}"
        )
        print(f"m={m:g}: status={res.get('status')} exit={res['exit_code']}")
    (base_out / "summary.csv").write_text("\n".join(lines) + "\n")
    return EXIT_OK if all(r["exit_code"] == EXIT_OK for r in results) else EXIT_INVARIANT


def cmd_sweep_eps(args) -> int:
    cfg = _load_config(args.config)
    values = [float(v) for v in args.values]
    if len(values) < 3:
        print("error: eps sweep requires at least 3 strictly decreasing values", file=sys.stderr)
        return EXIT_USAGE
    base_out = Path(cfg.output_dir) / "sweep"
    init, _ = build_initial_data(cfg.preset, cfg.grid)
    try:
        report, trajectories = epsilon_sweep(
            init, cfg.params, cfg.diffusion, cfg.controls, cfg.grid,
            eps_list=values, workers=_worker_count(len(values)), keep_trajectories=True,
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    base_out.mkdir(parents=True, exist_ok=True)
    m_star = mass_star(init.u0, cfg.grid)
    big_k = compute_K(init.w0, cfg.grid)
    member_codes = []
    lines = ["epsilon,status,exit_code,max_linf_u,all_invariants_pass"]
    for eps, traj in zip(values, trajectories):
        member_dir = base_out / f"{eps:g}"
        member_dir.mkdir(parents=True, exist_ok=True)
        write_trajectory_csv(traj, member_dir / "trajectory.csv")
        entries = evaluate_invariants(traj, cfg.params, m_star, big_k, cfg.monitor)
        ok = all(e.passed for e in entries)
        code = _STATUS_EXIT[traj.status]
        if code == EXIT_OK and not ok:
            code = EXIT_INVARIANT
        member_codes.append(code)
        lines.append(
            f"{eps:g},{traj.status.value},{code},"
            f"{float(np.max(traj.series['linf_u'])):.12g},{int(ok)}"
        )
        print(f"eps={eps:g}: status={traj.status.value} exit={code}")
    (base_out / "summary.csv").write_text("\n".join(lines) + "\n")
    (base_out / "sweep_report.json").write_text(json.dumps(report.to_json_dict(), indent=2) + "\n")
    dists = ", ".join("nan" if d != d else f"{d:.6g}" for d in report.distances)
    print(f"pairwise L2 distances: [{dists}]; cauchy_pass={report.cauchy_pass}")
    if any(c != EXIT_OK for c in member_codes):
        return next(c for c in member_codes if c != EXIT_OK)
    return EXIT_OK if report.cauchy_pass else EXIT_INVARIANT


def cmd_verify(args) -> int:
    cfg = _load_config(args.config)
    g = cfg.grid
    rng = np.random.default_rng(0)
    failures = 0

    def check(name, ok, detail=""):
        nonlocal failures
        print(f"[{'PASS' if ok else 'FAIL'}] {name}{': ' + detail if detail else ''}")
        failures += 0 if ok else 1

    # steady-state fixed point of the full stepper
    from .stepper import InitialData, StepControls

    init = InitialData(u0=g.new_field(1.0), v0=g.new_field(1.0), w0=g.new_field(1e-12))
    controls = StepControls(t_end=min(0.1, cfg.controls.t_end), sample_every=0.02)
    traj = advance(init, cfg.params, cfg.diffusion, controls, g)
    dev = max(
        float(np.max(np.abs(traj.final.u - 1.0))),
        float(np.max(np.abs(traj.final.v - 1.0))),
        float(np.max(np.abs(traj.final.w))),
    )
    check("steady_state_fixed_point", traj.status is RunStatus.COMPLETED and dev <= 1e-10,
          f"max deviation {dev:.3e}")

    # conservation of flux-form operators
    u = rng.random(g.shape) + 0.1
    psi = rng.normal(size=g.shape)
    worst = 0.0
    for out in (laplacian(psi, g), diffusion_divergence(u, cfg.diffusion, g),
                taxis_divergence(u, psi, g)):
        total = abs(float(np.sum(out)) * g.cell_volume)
        scale = max(1.0, float(np.sum(np.abs(out))) * g.cell_volume)
        worst = max(worst, total / scale)
    check("operator_conservation", worst <= 1e-12, f"worst relative total {worst:.3e}")

    # Helmholtz: CG against the spectral route, constants and an eigenmode
    alpha, beta = 0.01, 1.01
    rhs = rng.random(g.shape)
    x_cg = solve_helmholtz(rhs, alpha, beta, g)
    x_sp = HelmholtzDirect(g).solve(rhs, alpha, beta)
    gap = float(np.max(np.abs(x_cg - x_sp)))
    check("helmholtz_cg_vs_spectral", gap <= 1e-9, f"max gap {gap:.3e}")

    mode = g.new_field(1.0)
    lam = 0.0
    for d in range(g.dim):
        x = g.axis_centers(d)
        shape = [1] * g.dim
        shape[d] = g.cells[d]
        mode = mode * np.cos(np.pi * x / g.extents[d]).reshape(shape)
        h = g.spacing[d]
        lam += (2.0 - 2.0 * np.cos(np.pi / g.cells[d])) / h**2
    exact = mode / (beta + alpha * lam)
    err = float(np.max(np.abs(solve_helmholtz(mode, alpha, beta, g) - exact)))
    check("helmholtz_eigenpair", err <= 1e-10, f"max error {err:.3e}")

    return EXIT_OK if failures == 0 else EXIT_INVARIANT


def _load_config(path: str) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise _UsageExit(EXIT_IO, f"cannot read config: {exc}") from None
    try:
        return parse_config(text)
    except ConfigError as exc:
        raise _UsageExit(EXIT_USAGE, f"invalid config: {exc}") from None


class _UsageExit(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chtsim",
        description="Finite-volume chemotaxis-haptotaxis simulator and invariant harness",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="single simulation with invariant checks")
    p_run.add_argument("config")
    p_run.add_argument("--snapshots", action="store_true", help="store field snapshots in memory")
    p_run.set_defaults(func=cmd_run)
    p_m = sub.add_parser("sweep-m", help="independent runs across porous-medium exponents")
    p_m.add_argument("config")
    p_m.add_argument("--values", nargs="+", type=float, required=True)
    p_m.set_defaults(func=cmd_sweep_m)
    p_e = sub.add_parser("sweep-eps", help="regularization sweep with Cauchy distance check")
    p_e.add_argument("config")
    p_e.add_argument("--values", nargs="+", type=float, required=True)
    p_e.set_defaults(func=cmd_sweep_eps)
    p_v = sub.add_parser("verify", help="steady-state and operator self-tests")
    p_v.add_argument("config")
    p_v.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _UsageExit as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
