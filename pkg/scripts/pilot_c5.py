import json, time
import numpy as np
from chtsim.config import PresetConfig, build_initial_data
from chtsim.grid import Grid
from chtsim.model import DiffusionSpec, ModelParams
from chtsim.monitor import MonitorConfig, compute_K, make_monitor_hooks
from chtsim.stepper import StepControls, advance

g = Grid(extents=(1.0, 1.0), cells=(128, 128))
init, _ = build_initial_data(PresetConfig(name="gaussian_bump", amplitude=2.0, width=0.15,
                                          w0_cos_amplitude=0.25), g)
p = ModelParams(chi=5.0, xi=1.0, mu=1.0)
d = DiffusionSpec(delta=1.0, m=1.5)
c = StepControls(t_end=20.0, sample_every=0.1, cfl_diff=0.95, cfl_adv=0.15)
cfg = MonitorConfig.defaults(1.5, 2)
hooks = make_monitor_hooks(cfg, init.w0, g)
t0 = time.perf_counter()
traj = advance(init, p, d, c, g, hooks=hooks)
wall = time.perf_counter() - t0
K = compute_K(init.w0, g)
slack = traj.series["neglapw_slack"]
k = int(np.argmax(slack))
out = {
    "wall": wall, "steps": traj.steps, "status": traj.status.value,
    "K": K, "worst_slack": float(slack[k]), "t_worst": float(traj.times[k]),
    "slack_curve_every_0p5": [float(x) for x in slack[::5]],
    "max_linf_u": float(np.max(traj.series["linf_u"])),
}
print(json.dumps(out, indent=1))
