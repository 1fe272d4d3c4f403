"""Time integration for the coupled system.

One step, at adaptive dt from CFL bounds:

1. ``step_v``  - semi-implicit Helmholtz solve (1+dt) v' - dt Lap v' = v + dt u
2. ``step_w``  - exact exponential update w' = w exp(-v_mid dt), trapezoidal
   midpoint exponent (second order, structurally in [0, w])
3. ``step_u``  - explicit flux update of diffusion + upwind taxis, logistic
   term with Patankar denominator so u stays nonnegative

Blow-up is flagged numerically when the sup norm of u crosses a threshold,
mirroring the local-existence dichotomy without claiming analytic blow-up.

The Helmholtz system is solved either by preconditioned conjugate gradients
(`solve_helmholtz`, the reference route) or by an exact cosine-transform
inversion (`HelmholtzDirect`) that diagonalises the same flux-form stencil;
the direct route is the default inside `advance` because it is exact to
roundoff and an order of magnitude faster per step.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np
import scipy.fft

from .grid import Grid, integrate, linf_norm
from .model import DiffusionSpec, ModelParams, eval_diffusion
from .operators import (
    diffusion_divergence,
    grad_mag_sq,
    interior_face_diffs,
    laplacian,
    taxis_divergence,
)

__all__ = [
    "SolverFailure",
    "PositivityError",
    "RunStatus",
    "State",
    "StepControls",
    "InitialData",
    "Trajectory",
    "stable_dt",
    "solve_helmholtz",
    "HelmholtzDirect",
    "step_v",
    "step_w",
    "step_u",
    "advance",
]

# negative values smaller than this times linf(rhs) are solver noise; the
# exact solution of the M-matrix system is nonnegative for nonnegative data
V_NOISE_FLOOR = 1e-7


class SolverFailure(RuntimeError):
    def __init__(self, message: str, residual: float = math.nan):
        super().__init__(message)
        self.residual = residual


class PositivityError(RuntimeError):
    pass


class RunStatus(enum.Enum):
    COMPLETED = "completed"
    BLOWUP_SUSPECTED = "blowup_suspected"
    SOLVER_FAILURE = "solver_failure"


@dataclass
class State:
    t: float
    u: np.ndarray
    v: np.ndarray
    w: np.ndarray


@dataclass(frozen=True)
class StepControls:
    t_end: float
    cfl_diff: float = 0.45
    cfl_adv: float = 0.1
    dt_max: float = math.inf
    sample_every: float = 0.1
    blowup_threshold: float | None = None  # None -> 1e6 * max(1, linf(u0))
    track_step_mass: bool = False

    def __post_init__(self):
        if not self.t_end > 0:
            raise ValueError("t_end must be positive")
        if not 0 < self.cfl_diff <= 1:
            raise ValueError("cfl_diff must be in (0, 1]")
        if not 0 < self.cfl_adv <= 1:
            raise ValueError("cfl_adv must be in (0, 1]")
        if not self.dt_max > 0:
            raise ValueError("dt_max must be positive")
        if not self.sample_every > 0:
            raise ValueError("sample_every must be positive")
        if self.blowup_threshold is not None and not self.blowup_threshold > 0:
            raise ValueError("blowup_threshold must be positive")


@dataclass(frozen=True)
class InitialData:
    u0: np.ndarray
    v0: np.ndarray
    w0: np.ndarray

    def validate(self, grid: Grid) -> None:
        for name, f in (("u0", self.u0), ("v0", self.v0), ("w0", self.w0)):
            grid.check_field(f)
            if not np.all(np.isfinite(f)):
                raise ValueError(f"{name} contains non-finite values")
        if np.any(self.u0 < 0):
            raise ValueError("u0 must be nonnegative")
        if integrate(self.u0, grid) <= 0:
            raise ValueError("u0 must not be identically zero")
        if np.any(self.v0 < 0):
            raise ValueError("v0 must be nonnegative")
        if not np.all(self.w0 > 0):
            raise ValueError("w0 must be strictly positive")


@dataclass
class Trajectory:
    grid: Grid
    status: RunStatus
    message: str
    times: np.ndarray
    series: dict[str, np.ndarray]
    final: State
    w0_linf: float
    snapshots: list[tuple[float, np.ndarray, np.ndarray, np.ndarray]] | None = None
    max_step_mass_drift: float = 0.0
    steps: int = 0

    @property
    def num_samples(self) -> int:
        return len(self.times)


def stable_dt(
    state: State,
    params: ModelParams,
    dspec: DiffusionSpec,
    controls: StepControls,
    grid: Grid,
) -> float:
    """Explicit-stability time step.

    min(dt_max, cfl_diff h_min^2 / (2 dim D_max), cfl_adv h_min / V_max) with
    D_max the largest diffusivity over cells (D is monotone in u, so this is
    D at max u) and V_max the largest face speed |grad(chi v + xi w)|.
    """
    for name, f in (("u", state.u), ("v", state.v), ("w", state.w)):
        if not np.all(np.isfinite(f)):
            raise SolverFailure(f"non-finite values in {name} at t={state.t}")
    d_max = eval_diffusion(dspec, float(state.u.max()))
    psi = params.chi * state.v + params.xi * state.w
    v_max = 0.0
    for axis in range(grid.dim):
        if grid.cells[axis] > 1:
            dpsi = interior_face_diffs(psi, grid, axis)
            if dpsi.size:
                v_max = max(v_max, float(np.max(np.abs(dpsi))))
    h_min = min(grid.spacing)
    dt = controls.dt_max
    if d_max > 0:
        dt = min(dt, controls.cfl_diff * h_min**2 / (2 * grid.dim * d_max))
    if v_max > 0:
        dt = min(dt, controls.cfl_adv * h_min / v_max)
    return dt


def _jacobi_diag(grid: Grid, alpha: float, beta: float) -> np.ndarray:
    diag = np.full(grid.shape, beta, dtype=float)
    for axis in range(grid.dim):
        n = grid.cells[axis]
        faces = np.full(n, 2.0)
        if n >= 2:
            faces[0] = 1.0
            faces[-1] = 1.0
        else:
            faces[:] = 0.0
        shape = [1] * grid.dim
        shape[axis] = n
        diag += alpha * faces.reshape(shape) / grid.spacing[axis] ** 2
    return diag


def solve_helmholtz(
    rhs: np.ndarray,
    alpha: float,
    beta: float,
    grid: Grid,
    tol: float = 1e-10,
) -> np.ndarray:
    """Conjugate-gradient solve of beta x - alpha Lap x = rhs.

    Jacobi-preconditioned, deterministic (fixed reduction order), converged
    to relative residual <= tol. Raises SolverFailure past 10 * cells
    iterations.
    """
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    if not beta >= 1:
        raise ValueError("beta must be >= 1")
    grid.check_field(rhs)
    rhs_norm = float(np.linalg.norm(rhs))
    if rhs_norm == 0.0:
        return np.zeros_like(rhs)

    def apply_a(x):
        return beta * x - alpha * laplacian(x, grid)

    x = rhs / beta
    r = rhs - apply_a(x)
    diag = _jacobi_diag(grid, alpha, beta)
    z = r / diag
    p = z.copy()
    rz = float(np.vdot(r, z))
    max_iter = 10 * grid.num_cells
    for _ in range(max_iter):
        res = float(np.linalg.norm(r))
        if res <= tol * rhs_norm:
            return x
        ap = apply_a(p)
        pap = float(np.vdot(p, ap))
        if pap <= 0:
            raise SolverFailure("CG breakdown: non-positive curvature", residual=res / rhs_norm)
        step = rz / pap
        x += step * p
        r -= step * ap
        z = r / diag
        rz_new = float(np.vdot(r, z))
        p = z + (rz_new / rz) * p
        rz = rz_new
    raise SolverFailure(
        f"CG did not converge within {max_iter} iterations",
        residual=float(np.linalg.norm(r)) / rhs_norm,
    )


try:  # raw pocketfft skips several wrapper layers on the per-step hot path
    from scipy.fft._pocketfft.pypocketfft import dct as _raw_dct
except ImportError:  # pragma: no cover - fall back to the public API
    _raw_dct = None


class HelmholtzDirect:
    """Exact direct solve of beta x - alpha Lap x = rhs on the flux stencil.

    1D is a single Thomas sweep. In 2D the contiguous axis is diagonalised by
    a cosine transform (the cell-centered Neumann stencil has eigenvectors
    cos(pi k (j + 1/2) / N) with eigenvalues -(2 - 2 cos(pi k / N))/h^2) and
    the remaining axis is batch-solved tridiagonally, one system per mode.
    Either way the produced x solves the same linear system as the CG route,
    to machine precision rather than to an iteration tolerance.
    """

    def __init__(self, grid: Grid):
        self.grid = grid
        if grid.dim == 2:
            n1 = grid.cells[1]
            k = np.arange(n1)
            self.lam1 = (2.0 - 2.0 * np.cos(np.pi * k / n1)) / grid.spacing[1] ** 2
            self._fhat = np.empty(grid.shape, dtype=float)
            self._cp = np.empty(grid.shape, dtype=float)
            self._dp = np.empty(grid.shape, dtype=float)
        else:
            n = grid.cells[0]
            self._cp = np.empty(n, dtype=float)
            self._dp = np.empty(n, dtype=float)
        self.inv_h0_sq = 1.0 / grid.spacing[0] ** 2

    def solve(self, rhs: np.ndarray, alpha: float, beta: float,
              out: np.ndarray | None = None) -> np.ndarray:
        """Solve into ``out`` (allocated when None; must not alias ``rhs``)."""
        if self.grid.dim == 1:
            if out is None:
                out = np.empty_like(rhs)
            _kernels.thomas_1d(rhs, alpha, beta, self.inv_h0_sq, self._cp, self._dp, out)
            return out
        if _raw_dct is not None:
            fhat = _raw_dct(rhs, 2, (1,), 0, self._fhat, 1)
        else:  # pragma: no cover
            fhat = scipy.fft.dct(rhs, type=2, axis=1)
        _kernels.thomas_axis0(fhat, self.lam1, alpha, beta, self.inv_h0_sq,
                              self._cp, self._dp)
        # unnormalized DCT-III with inorm=2 is the exact inverse transform
        if _raw_dct is not None:
            return _raw_dct(fhat, 3, (1,), 2, out, 1)
        res = scipy.fft.idct(fhat, type=2, axis=1)  # pragma: no cover
        if out is not None:
            out[...] = res
            return out
        return res


def _floor_v(v_new: np.ndarray, rhs_linf: float) -> np.ndarray:
    vmin = float(v_new.min())
    if vmin < 0:
        if vmin < -V_NOISE_FLOOR * max(rhs_linf, 1e-300):
            raise SolverFailure(f"v solve produced negative values beyond solver noise: {vmin}")
        np.maximum(v_new, 0.0, out=v_new)
    return v_new


def step_v(
    state: State,
    dt: float,
    grid: Grid,
    solver: HelmholtzDirect | None = None,
    method: str = "direct",
) -> np.ndarray:
    """Semi-implicit update (1 + dt) v' - dt Lap v' = v + dt u.

    The system matrix is an M-matrix, so v' >= 0 whenever v, u >= 0; negative
    entries within solver noise are floored to zero to keep that property
    exact in floating point.
    """
    if not dt > 0:
        raise ValueError("dt must be positive")
    rhs = state.v + dt * state.u
    rhs_linf = linf_norm(rhs)  # before the solve: the direct route may reuse buffers
    if method == "direct":
        if solver is None:
            solver = HelmholtzDirect(grid)
        v_new = solver.solve(rhs, alpha=dt, beta=1.0 + dt)
    elif method == "cg":
        v_new = solve_helmholtz(rhs, alpha=dt, beta=1.0 + dt, grid=grid)
    else:
        raise ValueError(f"unknown Helmholtz method {method!r}")
    return _floor_v(v_new, rhs_linf)


def step_w(state: State, v_mid: np.ndarray, dt: float) -> np.ndarray:
    """Exact exponential ECM update w' = w exp(-v_mid dt)."""
    if not dt > 0:
        raise ValueError("dt must be positive")
    return state.w * np.exp(-v_mid * dt)


def step_u(
    state: State,
    dt: float,
    params: ModelParams,
    dspec: DiffusionSpec,
    grid: Grid,
) -> np.ndarray:
    """Explicit transport update of u; state.v and state.w are the fresh fields.

    u' = [u + dt (div(D grad u) - chi div(u grad v) - xi div(u grad w)
          + mu u (1 - w))] / (1 + dt mu u)

    which realises the logistic sink semi-implicitly and keeps u >= 0 for
    CFL-admissible dt. A negative result aborts: it signals CFL
    misconfiguration.
    """
    u, v, w = state.u, state.v, state.w
    transport = diffusion_divergence(u, dspec, grid)
    if params.chi != 0.0:
        transport -= params.chi * taxis_divergence(u, v, grid)
    if params.xi != 0.0:
        transport -= params.xi * taxis_divergence(u, w, grid)
    u_new = (u + dt * (transport + params.mu * u * (1.0 - w))) / (1.0 + dt * params.mu * u)
    umin = float(u_new.min())
    if umin < 0:
        idx = np.unravel_index(int(np.argmin(u_new)), u_new.shape)
        raise PositivityError(
            f"u went negative at cell {list(idx)} ({umin:.3e}) after step with dt={dt}; "
            "the CFL controls are too loose"
        )
    return u_new


try:
    from . import _kernels

    HAVE_KERNELS = True
except ImportError:  # pragma: no cover - numba is a hard dependency
    _kernels = None
    HAVE_KERNELS = False


class _NumpyStepper:
    """Reference path: composes the public step operations."""

    def __init__(self, grid, params, dspec, controls):
        self.grid = grid
        self.params = params
        self.dspec = dspec
        self.controls = controls
        self.solver = HelmholtzDirect(grid)

    def cfl_stats(self, state):
        d_max = eval_diffusion(self.dspec, float(state.u.max()))
        psi = self.params.chi * state.v + self.params.xi * state.w
        v_max = 0.0
        for axis in range(self.grid.dim):
            if self.grid.cells[axis] > 1:
                dpsi = interior_face_diffs(psi, self.grid, axis)
                v_max = max(v_max, float(np.max(np.abs(dpsi))))
        return d_max, v_max

    def step(self, state, dt):
        v_new = step_v(state, dt, self.grid, solver=self.solver)
        v_mid = 0.5 * (state.v + v_new)
        w_new = step_w(state, v_mid, dt)
        u_new = step_u(State(state.t, state.u, v_new, w_new), dt, self.params, self.dspec, self.grid)
        state.u, state.v, state.w = u_new, v_new, w_new
        state.t += dt
        return float(u_new.max())


class _KernelStepper:
    """Fused numba path; numerically equivalent to _NumpyStepper."""

    def __init__(self, grid, params, dspec, controls):
        self.grid = grid
        self.params = params
        self.dspec = dspec
        self.solver = HelmholtzDirect(grid)
        self.kind = _kernels.exponent_kind(dspec.m)
        self.d_buf = grid.new_field()
        self.rhs_buf = grid.new_field()
        self.u_buf = grid.new_field()
        self.w_buf = grid.new_field()
        self.v_spare = grid.new_field()
        if grid.dim == 2:
            ny = grid.cells[1]
            self.fx_a = np.zeros(ny)
            self.fx_b = np.zeros(ny)
            self.fy = np.zeros(max(ny - 1, 1))
        self._stats = None  # (d_max, v_face_max) carried between steps
        self._umax = 0.0
        self._vmax_linf = 0.0

    def _d_scalar(self, s: float) -> float:
        d = self.dspec
        return d.offset + d.delta * (s + d.epsilon) ** (d.m - 1.0)

    def cfl_stats(self, state):
        if self._stats is not None:
            return self._stats
        self._umax = float(state.u.max())
        d_max = self._d_scalar(self._umax)
        psi = self.params.chi * state.v + self.params.xi * state.w
        v_max = 0.0
        for axis in range(self.grid.dim):
            if self.grid.cells[axis] > 1:
                dpsi = interior_face_diffs(psi, self.grid, axis)
                v_max = max(v_max, float(np.max(np.abs(dpsi))))
        self._vmax_linf = float(state.v.max())
        return d_max, v_max

    def step(self, state, dt):
        g, p, d = self.grid, self.params, self.dspec
        em1 = d.m - 1.0
        two_d = g.dim == 2
        if two_d:
            _kernels.prepare_step_2d(state.u, state.v, dt, d.offset, d.delta, d.epsilon,
                                     em1, self.kind, self.d_buf, self.rhs_buf)
        else:
            _kernels.prepare_step_1d(state.u, state.v, dt, d.offset, d.delta, d.epsilon,
                                     em1, self.kind, self.d_buf, self.rhs_buf)
        v_new = self.solver.solve(self.rhs_buf, alpha=dt, beta=1.0 + dt, out=self.v_spare)
        # linf bounds from the previous step stats; the exact solution obeys
        # linf(v') <= (linf(v) + dt linf(u)) / (1 + dt)
        rhs_bound = self._vmax_linf + dt * self._umax
        use_taylor = 0.5 * (self._vmax_linf + rhs_bound) * dt < _kernels.TAYLOR_X_MAX
        if two_d:
            vmin, vmax = _kernels.w_update_2d(state.w, state.v, v_new, dt, use_taylor, self.w_buf)
        else:
            vmin, vmax = _kernels.w_update_1d(state.w, state.v, v_new, dt, use_taylor, self.w_buf)
        if vmin < 0.0:
            if vmin < -V_NOISE_FLOOR * max(rhs_bound, 1e-300):
                raise SolverFailure(
                    f"v solve produced negative values beyond solver noise: {vmin}"
                )
            np.maximum(v_new, 0.0, out=v_new)
        if two_d:
            umin, umax, vfmax = _kernels.u_update_2d(
                state.u, self.d_buf, v_new, self.w_buf, p.chi, p.xi, p.mu, dt,
                g.spacing[0], g.spacing[1], self.fx_a, self.fx_b, self.fy, self.u_buf,
            )
        else:
            umin, umax, vfmax = _kernels.u_update_1d(
                state.u, self.d_buf, v_new, self.w_buf, p.chi, p.xi, p.mu, dt,
                g.spacing[0], self.u_buf,
            )
        if umin < 0:
            raise PositivityError(
                f"u went negative ({umin:.3e}) after step with dt={dt}; "
                "the CFL controls are too loose"
            )
        if not (math.isfinite(umax) and math.isfinite(vmax)):
            raise SolverFailure(f"non-finite state at t={state.t + dt}")
        state.u, self.u_buf = self.u_buf, state.u
        state.w, self.w_buf = self.w_buf, state.w
        self.v_spare = state.v
        state.v = v_new
        state.t += dt
        self._umax = umax
        self._stats = (self._d_scalar(umax), vfmax)
        self._vmax_linf = vmax
        return umax


def _builtin_sample(series, state, dt, grid, w_prev_sample):
    series["dt"].append(dt)
    series["mass"].append(integrate(state.u, grid))
    series["linf_u"].append(float(np.max(state.u)))
    series["linf_v"].append(float(np.max(state.v)))
    series["linf_w"].append(float(np.max(state.w)))
    series["min_u"].append(float(np.min(state.u)))
    series["min_v"].append(float(np.min(state.v)))
    series["min_w"].append(float(np.min(state.w)))
    gv = grad_mag_sq(state.v, grid)
    series["l2_gradv"].append(float(np.sqrt(integrate(gv, grid))))
    if w_prev_sample is None:
        series["w_monotone_violation"].append(0.0)
    else:
        series["w_monotone_violation"].append(float(np.max(state.w - w_prev_sample)))


def advance(
    init: InitialData,
    params: ModelParams,
    dspec: DiffusionSpec,
    controls: StepControls,
    grid: Grid,
    hooks: Mapping[str, Callable[[np.ndarray, np.ndarray, np.ndarray, Grid, float], float]] | None = None,
    store_snapshots: bool = False,
    backend: str = "auto",
) -> Trajectory:
    """Run the simulation to t_end, sampling monitors every sample_every.

    Per step: dt from `stable_dt` (capped to land exactly on sample times),
    then v -> w -> u updates. Terminates COMPLETED, or BLOWUP_SUSPECTED when
    linf(u) crosses the threshold, or SOLVER_FAILURE on solver/positivity
    aborts. Hooks are named scalar evaluators appended to the series.
    """
    init.validate(grid)
    if backend == "auto":
        backend = "kernel" if HAVE_KERNELS else "numpy"
    if backend == "kernel" and not HAVE_KERNELS:
        raise ValueError("numba kernels unavailable")
    stepper_cls = _KernelStepper if backend == "kernel" else _NumpyStepper
    stepper = stepper_cls(grid, params, dspec, controls)

    state = State(0.0, init.u0.astype(float).copy(), init.v0.astype(float).copy(),
                  init.w0.astype(float).copy())
    w0_linf = linf_norm(init.w0)
    threshold = controls.blowup_threshold
    if threshold is None:
        threshold = 1e6 * max(1.0, linf_norm(init.u0))

    hooks = dict(hooks or {})
    series: dict[str, list[float]] = {
        k: [] for k in ("dt", "mass", "linf_u", "linf_v", "linf_w",
                        "min_u", "min_v", "min_w", "l2_gradv", "w_monotone_violation")
    }
    for name in hooks:
        series[name] = []
    times: list[float] = []
    snapshots = [] if store_snapshots else None
    w_prev_sample: np.ndarray | None = None
    max_mass_drift = 0.0
    prev_mass = integrate(state.u, grid) if controls.track_step_mass else None

    def record(dt_now: float):
        nonlocal w_prev_sample
        times.append(state.t)
        _builtin_sample(series, state, dt_now, grid, w_prev_sample)
        for name, fn in hooks.items():
            series[name].append(float(fn(state.u, state.v, state.w, grid, state.t)))
        w_prev_sample = state.w.copy()
        if snapshots is not None:
            snapshots.append((state.t, state.u.copy(), state.v.copy(), state.w.copy()))

    status = None
    message = "reached t_end"
    record(0.0)
    if float(np.max(state.u)) > threshold:
        return Trajectory(
            grid=grid,
            status=RunStatus.BLOWUP_SUSPECTED,
            message=f"linf(u0)={float(np.max(state.u)):.6g} already exceeds blow-up threshold {threshold:.6g}",
            times=np.asarray(times),
            series={k: np.asarray(vs) for k, vs in series.items()},
            final=state,
            w0_linf=w0_linf,
            snapshots=snapshots,
        )
    sample_idx = 1
    next_sample = min(sample_idx * controls.sample_every, controls.t_end)
    last_dt = 0.0
    n_steps = 0
    # loop-invariant scalars, hoisted off the per-step path
    t_end = controls.t_end
    dt_cap = controls.dt_max
    h_min = min(grid.spacing)
    diff_num = controls.cfl_diff * h_min**2 / (2 * grid.dim)
    adv_num = controls.cfl_adv * h_min
    try:
        while state.t < t_end:
            gap = next_sample - state.t
            if gap <= 1e-12 * max(1.0, next_sample):
                # accumulated t landed on the event within roundoff: snap
                state.t = next_sample
                record(last_dt)
                sample_idx += 1
                next_sample = min(sample_idx * controls.sample_every, t_end)
                continue
            d_max, v_max = stepper.cfl_stats(state)
            dt = dt_cap
            if d_max > 0:
                dt = min(dt, diff_num / d_max)
            if v_max > 0:
                dt = min(dt, adv_num / v_max)
            hit_event = False
            if dt >= gap:
                dt = gap
                hit_event = True
            if not (dt > 0 and math.isfinite(dt)):
                raise SolverFailure(f"non-positive or non-finite dt={dt} at t={state.t}")
            umax = stepper.step(state, dt)
            n_steps += 1
            last_dt = dt
            if prev_mass is not None:
                mass = integrate(state.u, grid)
                max_mass_drift = max(max_mass_drift, abs(mass - prev_mass))
                prev_mass = mass
            if hit_event:
                state.t = next_sample
                record(dt)
                sample_idx += 1
                next_sample = min(sample_idx * controls.sample_every, controls.t_end)
            if umax > threshold:
                status = RunStatus.BLOWUP_SUSPECTED
                message = f"linf(u)={umax:.6g} exceeded blow-up threshold {threshold:.6g} at t={state.t:.6g}"
                if not hit_event:
                    record(dt)
                break
    except (SolverFailure, PositivityError) as exc:
        status = RunStatus.SOLVER_FAILURE
        message = str(exc)
    if status is None:
        status = RunStatus.COMPLETED
    return Trajectory(
        grid=grid,
        status=status,
        message=message,
        times=np.asarray(times),
        series={k: np.asarray(vs) for k, vs in series.items()},
        final=state,
        w0_linf=w0_linf,
        snapshots=snapshots,
        max_step_mass_drift=max_mass_drift,
        steps=n_steps,
    )
