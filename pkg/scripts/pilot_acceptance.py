"""Calibration pilot for the heavy acceptance runs (criterion 4/5 scale).

Writes timing and verdict data to scripts/pilot_results.json.
"""
import json
import time
from pathlib import Path

import numpy as np

from chtsim.config import PresetConfig, build_initial_data
from chtsim.grid import Grid
from chtsim.model import DiffusionSpec, ModelParams
from chtsim.monitor import MonitorConfig, boundedness_verdict, compute_K, make_monitor_hooks, mass_star
from chtsim.stepper import StepControls, advance

results = {}

def criterion4_like(n, t_end, w0_cos, tag):
    grid = Grid(extents=(1.0, 1.0), cells=(n, n))
    preset = PresetConfig(name="gaussian_bump", amplitude=2.0, width=0.15,
                          w0_cos_amplitude=w0_cos)
    init, _ = build_initial_data(preset, grid)
    params = ModelParams(chi=5.0, xi=1.0, mu=1.0)
    dspec = DiffusionSpec(delta=1.0, m=1.5)
    controls = StepControls(t_end=t_end, sample_every=0.1, cfl_diff=0.9, cfl_adv=0.15)
    cfg = MonitorConfig.defaults(1.5, 2)
    hooks = make_monitor_hooks(cfg, init.w0, grid)
    t0 = time.perf_counter()
    traj = advance(init, params, dspec, controls, grid, hooks=hooks)
    wall = time.perf_counter() - t0
    slack = traj.series["neglapw_slack"]
    k = int(np.argmax(slack))
    out = {
        "wall_seconds": wall,
        "status": traj.status.value,
        "message": traj.message,
        "num_samples": traj.num_samples,
        "max_linf_u": float(np.max(traj.series["linf_u"])),
        "final_linf_u": float(traj.series["linf_u"][-1]),
        "linf_u_curve": [float(x) for x in traj.series["linf_u"][::10]],
        "verdict_linf_u": boundedness_verdict(traj.times, traj.series["linf_u"]).value,
        "verdict_gradv": boundedness_verdict(traj.times, traj.series["gradv_l1.5"]).value,
        "verdict_y22": boundedness_verdict(traj.times, traj.series["y_p2_q2"]).value,
        "K": compute_K(init.w0, grid),
        "worst_negl_slack": float(slack[k]),
        "t_worst_negl": float(traj.times[k]),
        "negl_slack_curve": [float(x) for x in slack[::10]],
        "mass_max": float(np.max(traj.series["mass"])),
        "m_star": mass_star(init.u0, grid),
    }
    results[tag] = out
    print(tag, json.dumps(out, indent=1)[:600], flush=True)


here = Path(__file__).parent
criterion4_like(128, 20.0, 0.0, "c4_128_t20")
(here / "pilot_results.json").write_text(json.dumps(results, indent=2))
criterion4_like(128, 20.0, 0.25, "c5_128_t20")
(here / "pilot_results.json").write_text(json.dumps(results, indent=2))
criterion4_like(256, 5.0, 0.25, "c5_256_t5")
(here / "pilot_results.json").write_text(json.dumps(results, indent=2))
print("DONE")
