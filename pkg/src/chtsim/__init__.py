"""Finite-volume simulator and invariant-verification harness for a
chemotaxis-haptotaxis system with nonlinear (possibly degenerate) diffusion."""

from .grid import Grid, integrate, linf_norm, lp_norm
from .model import (
    DiffusionSpec,
    ModelParams,
    RegimeVerdict,
    eval_diffusion,
    regularize,
    validate_regime,
)
from .stepper import (
    InitialData,
    RunStatus,
    State,
    StepControls,
    Trajectory,
    advance,
    solve_helmholtz,
    stable_dt,
    step_u,
    step_v,
    step_w,
)

__version__ = "0.1.0"

__all__ = [
    "Grid",
    "integrate",
    "lp_norm",
    "linf_norm",
    "DiffusionSpec",
    "ModelParams",
    "RegimeVerdict",
    "eval_diffusion",
    "regularize",
    "validate_regime",
    "InitialData",
    "RunStatus",
    "State",
    "StepControls",
    "Trajectory",
    "advance",
    "solve_helmholtz",
    "stable_dt",
    "step_u",
    "step_v",
    "step_w",
    "__version__",
]
