"""Invariant checks and boundedness verdicts along simulated trajectories.

Each checkable estimate is rendered as an `InvariantEntry` carrying the worst
measured slack (measured minus bound) and the time it occurred. Verdicts are
windowed-growth heuristics with configurable thresholds, not analytic
statements; the defaults (1% final-window growth for Bounded, 2x for Growing)
are documented calibration choices.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .grid import Grid, integrate, linf_norm
from .model import ModelParams
from .operators import grad_mag_sq, laplacian
from .stepper import Trajectory

__all__ = [
    "Verdict",
    "MonitorConfig",
    "InvariantEntry",
    "moser_ladder",
    "mass_star",
    "check_mass_bound",
    "compute_K",
    "neg_laplacian_w_slack",
    "check_neg_laplacian_w",
    "functional_y",
    "boundedness_verdict",
    "semigroup_norm_series",
    "default_gradient_exponent",
    "make_monitor_hooks",
    "evaluate_invariants",
]


class Verdict(enum.Enum):
    BOUNDED = "bounded"
    GROWING = "growing"
    INCONCLUSIVE = "inconclusive"


def moser_ladder(p0: float, m: float, count: int) -> list[float]:
    """Exponent ladder p_k = 2 p_{k-1} + 1 - m starting from p0."""
    ladder = [p0]
    for _ in range(count):
        ladder.append(2.0 * ladder[-1] + 1.0 - m)
    return ladder


def default_gradient_exponent(n: int) -> float:
    """Midpoint of the admissible interval [1, n/(n-1)) for gradient norms."""
    return 0.5 * (1.0 + n / (n - 1.0))


@dataclass(frozen=True)
class MonitorConfig:
    """Monitored exponents and tolerances.

    p_list and q_list are parallel: pair k is (p_list[k], q_list[k]). The
    default seeds (2,2) plus the first three ladder values from
    p0 = max(2, 1.6 (m-1)), each paired with q = 2.
    """

    p_list: tuple[float, ...]
    q_list: tuple[float, ...]
    s_list: tuple[float, ...]
    tolerance: float = 1e-8
    window_fraction: float = 0.25
    growth_tol: float = 0.01

    def __post_init__(self):
        if len(self.p_list) != len(self.q_list):
            raise ValueError("p_list and q_list must have equal length")
        if any(p <= 1 for p in self.p_list) or any(q <= 1 for q in self.q_list):
            raise ValueError("monitored exponents must exceed 1")
        if not 0 < self.window_fraction < 1:
            raise ValueError("window_fraction must be in (0, 1)")

    @classmethod
    def defaults(cls, m: float, n: int) -> "MonitorConfig":
        p0 = max(2.0, 1.6 * (m - 1.0))
        ladder = moser_ladder(p0, m, 3)[1:]
        p_list = (2.0, *ladder)
        return cls(p_list=p_list, q_list=(2.0,) * len(p_list), s_list=(default_gradient_exponent(n),))

    @property
    def pq_pairs(self) -> list[tuple[float, float]]:
        return list(zip(self.p_list, self.q_list))


@dataclass
class InvariantEntry:
    name: str
    passed: bool
    worst_slack: float
    t_worst: float
    bound: float
    details: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "check": self.name,
            "pass": bool(self.passed),
            "worst_slack": float(self.worst_slack),
            "t_worst": float(self.t_worst),
            "bound": float(self.bound),
            "details": {k: (v.value if isinstance(v, Verdict) else v) for k, v in self.details.items()},
        }


def mass_star(u0: np.ndarray, grid: Grid) -> float:
    """Mass ceiling max(|Omega|, integral of u0)."""
    if np.any(u0 < 0):
        raise ValueError("u0 must be nonnegative")
    return max(grid.domain_volume, integrate(u0, grid))


def check_mass_bound(
    times: np.ndarray,
    mass: np.ndarray,
    m_star: float,
    mu: float,
    tol: float = 1e-8,
) -> InvariantEntry:
    """Mass stays below m_star; for mu = 0 it is additionally conserved."""
    times = np.asarray(times)
    mass = np.asarray(mass)
    if len(times) == 0:
        raise ValueError("empty series")
    slack = mass - m_star
    k = int(np.argmax(slack))
    passed = slack[k] <= tol * m_star
    details: dict = {"mu": mu}
    if mu == 0.0:
        drift = np.abs(mass - mass[0])
        j = int(np.argmax(drift))
        conserved = drift[j] <= tol * mass[0]
        details["max_conservation_drift"] = float(drift[j])
        details["t_worst_drift"] = float(times[j])
        passed = passed and conserved
    return InvariantEntry(
        name="mass_bound",
        passed=bool(passed),
        worst_slack=float(slack[k]),
        t_worst=float(times[k]),
        bound=m_star,
        details=details,
    )


def compute_K(w0: np.ndarray, grid: Grid) -> float:
    """Curvature constant of the ECM estimate, from discrete operators:

    linf(Lap w0) + 4 linf(|grad sqrt(w0)|^2) + linf(w0)/e
    """
    if np.any(w0 <= 0):
        raise ValueError("w0 must be strictly positive")
    return (
        linf_norm(laplacian(w0, grid))
        + 4.0 * linf_norm(grad_mag_sq(np.sqrt(w0), grid))
        + linf_norm(w0) / math.e
    )


def neg_laplacian_w_slack(v: np.ndarray, w: np.ndarray, w0_linf: float, K: float, grid: Grid) -> float:
    """max over cells of (-Lap w - linf(w0) v - K); nonpositive when the
    one-sided ECM curvature estimate holds discretely."""
    return float(np.max(-laplacian(w, grid) - w0_linf * v - K))


def check_neg_laplacian_w(
    times: np.ndarray,
    slack_series: np.ndarray,
    K: float,
    tol: float = 1e-8,
) -> InvariantEntry:
    times = np.asarray(times)
    slack_series = np.asarray(slack_series)
    k = int(np.argmax(slack_series))
    return InvariantEntry(
        name="neg_laplacian_w",
        passed=bool(slack_series[k] <= tol * (K + 1.0)),
        worst_slack=float(slack_series[k]),
        t_worst=float(times[k]),
        bound=K,
        details={"tolerance_scale": K + 1.0},
    )


def functional_y(u: np.ndarray, v: np.ndarray, p: float, q: float, grid: Grid) -> float:
    """integral of u^p plus integral of |grad v|^(2q)."""
    if p <= 1 or q <= 1:
        raise ValueError("functional exponents must exceed 1")
    return integrate(u**p, grid) + integrate(grad_mag_sq(v, grid) ** q, grid)


def boundedness_verdict(
    times: np.ndarray,
    values: np.ndarray,
    window_fraction: float = 0.25,
    growth_tol: float = 0.01,
) -> Verdict:
    """Windowed growth heuristic.

    Bounded iff the max over the trailing window_fraction of the time span
    stays within (1 + growth_tol) of the max over the earlier part; Growing
    iff it exceeds twice the earlier max; otherwise Inconclusive.
    """
    times = np.asarray(times)
    values = np.asarray(values)
    if len(times) < 10:
        return Verdict.INCONCLUSIVE
    t_cut = times[-1] - window_fraction * (times[-1] - times[0])
    late = values[times >= t_cut]
    early = values[times < t_cut]
    if len(late) == 0 or len(early) == 0:
        return Verdict.INCONCLUSIVE
    max_late = float(np.max(late))
    max_early = float(np.max(early))
    if max_late <= (1.0 + growth_tol) * max_early:
        return Verdict.BOUNDED
    if max_late > 2.0 * max_early:
        return Verdict.GROWING
    return Verdict.INCONCLUSIVE


def semigroup_norm_series(
    traj: Trajectory,
    s_list: tuple[float, ...],
    n: int,
) -> tuple[dict[float, np.ndarray], list[str]]:
    """Time series of the L^s norms of |grad v| for each requested s.

    Exponents outside [1, n/(n-1)) are still computed but flagged with a
    configuration warning.
    """
    warnings = []
    s_max = n / (n - 1.0)
    for s in s_list:
        if not (1.0 <= s < s_max):
            warnings.append(
                f"gradient exponent s={s} outside admissible [1, {s_max:.6g}) for n={n}"
            )
    out: dict[float, np.ndarray] = {}
    hook_named = all(f"gradv_l{s:g}" in traj.series for s in s_list)
    if hook_named:
        for s in s_list:
            out[s] = traj.series[f"gradv_l{s:g}"]
    elif traj.snapshots is not None:
        grid = traj.grid
        for s in s_list:
            vals = []
            for _, _, v, _ in traj.snapshots:
                gv = np.sqrt(grad_mag_sq(v, grid))
                vals.append(integrate(gv**s, grid) ** (1.0 / s))
            out[s] = np.asarray(vals)
    else:
        raise ValueError("trajectory has neither gradient-norm hooks nor snapshots")
    return out, warnings


def make_monitor_hooks(
    cfg: MonitorConfig,
    w0: np.ndarray,
    grid: Grid,
) -> dict:
    """Named per-sample evaluators for advance(): y functionals, gradient
    norms and the ECM curvature slack."""
    w0_linf = linf_norm(w0)
    K = compute_K(w0, grid)
    hooks = {}
    for p, q in cfg.pq_pairs:
        def y_hook(u, v, w, g, t, p=p, q=q):
            return functional_y(u, v, p, q, g)
        hooks[f"y_p{p:g}_q{q:g}"] = y_hook
    for s in cfg.s_list:
        def grad_hook(u, v, w, g, t, s=s):
            gv = np.sqrt(grad_mag_sq(v, g))
            return integrate(gv**s, g) ** (1.0 / s)
        hooks[f"gradv_l{s:g}"] = grad_hook
    def slack_hook(u, v, w, g, t):
        return neg_laplacian_w_slack(v, w, w0_linf, K, g)
    hooks["neglapw_slack"] = slack_hook
    return hooks


def evaluate_invariants(
    traj: Trajectory,
    params: ModelParams,
    m_star: float,
    K: float,
    cfg: MonitorConfig,
) -> list[InvariantEntry]:
    """Render every checkable estimate along a finished trajectory."""
    t = traj.times
    s = traj.series
    entries = [check_mass_bound(t, s["mass"], m_star, params.mu, cfg.tolerance)]

    def worst(series, sign=1.0):
        k = int(np.argmax(sign * series))
        return float(series[k]), float(t[k])

    val, tw = worst(-s["min_u"])
    entries.append(InvariantEntry("u_nonnegative", val <= 0.0, val, tw, 0.0))
    val, tw = worst(-s["min_v"])
    entries.append(InvariantEntry("v_nonnegative", val <= 0.0, val, tw, 0.0))
    val, tw = worst(-s["min_w"])
    entries.append(InvariantEntry("w_strictly_positive", val < 0.0, val, tw, 0.0))
    # zero tolerance on the ECM range and monotonicity (structural claims)
    val, tw = worst(s["linf_w"] - traj.w0_linf)
    entries.append(InvariantEntry("w_below_initial_sup", val <= 0.0, val, tw, traj.w0_linf))
    val, tw = worst(s["w_monotone_violation"])
    entries.append(InvariantEntry("w_monotone_nonincreasing", val <= 0.0, val, tw, 0.0))
    if "neglapw_slack" in s:
        entries.append(check_neg_laplacian_w(t, s["neglapw_slack"], K, cfg.tolerance))

    def verdict_entry(name, series):
        v = boundedness_verdict(t, series, cfg.window_fraction, cfg.growth_tol)
        late_max = float(np.max(series)) if len(series) else math.nan
        return InvariantEntry(
            name=f"bounded_{name}",
            passed=v is not Verdict.GROWING,
            worst_slack=0.0 if v is Verdict.BOUNDED else late_max,
            t_worst=float(t[-1]) if len(t) else math.nan,
            bound=math.nan,
            details={"verdict": v, "max": late_max},
        )

    entries.append(verdict_entry("linf_u", s["linf_u"]))
    for sname in s:
        if sname.startswith("gradv_l") or sname.startswith("y_p"):
            entries.append(verdict_entry(sname, s[sname]))
    return entries
