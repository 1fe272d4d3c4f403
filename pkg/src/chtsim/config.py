"""Run configuration: INI-style parsing, validation and initial-data presets.

Runs are archived artifacts, so configs are files that document themselves.
Every optional key has a documented default; unknown sections or keys are
rejected with the offending name.

Sections and keys (defaults in brackets):

  [grid]      dim (1|2), extents (comma floats), cells (comma ints)  - required
  [analysis]  n (2|3|4)                                              [2]
  [diffusion] delta, m  - required; offset [0], epsilon [0]
  [params]    chi, xi, mu  - required
  [controls]  cfl_diff [0.45], cfl_adv [0.1], dt_max [inf], t_end [1.0],
              sample_every [0.1], blowup_threshold [auto]
  [initial]   preset [constant_steady] plus preset keys:
              constant_steady:       w0 [1e-12]
              gaussian_bump:         amplitude [1.0], width [0.1],
                                     center [0.5], mass [none],
                                     w0_cos_amplitude [0.0]
              perturbed_equilibrium: rho [0.1], seed [0]
  [monitor]   p_list, q_list, s_list [model defaults], tolerance [1e-8],
              window_fraction [0.25], growth_tol [0.01]
  [output]    dir [out]
"""
from __future__ import annotations

import configparser
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .grid import Grid
from .model import DiffusionSpec, ModelParams, validate_regime
from .monitor import MonitorConfig
from .stepper import InitialData, StepControls

__all__ = ["ConfigError", "PresetConfig", "RunConfig", "parse_config", "serialize_config", "build_initial_data"]


class ConfigError(ValueError):
    """Raised with a section/key-anchored message on invalid configuration."""


_PRESET_KEYS = {
    "constant_steady": {"w0"},
    "gaussian_bump": {"amplitude", "width", "center", "mass", "w0_cos_amplitude"},
    "perturbed_equilibrium": {"rho", "seed"},
}


@dataclass(frozen=True)
class PresetConfig:
    name: str = "constant_steady"
    w0: float = 1e-12
    amplitude: float = 1.0
    width: float = 0.1
    center: float = 0.5
    mass: float | None = None
    w0_cos_amplitude: float = 0.0
    rho: float = 0.1
    seed: int = 0

    def __post_init__(self):
        if self.name not in _PRESET_KEYS:
            raise ConfigError(f"[initial] preset: unknown preset {self.name!r}")
        if self.name == "constant_steady" and not self.w0 > 0:
            raise ConfigError("[initial] w0: must be strictly positive")
        if self.name == "gaussian_bump":
            if not self.amplitude > 0:
                raise ConfigError("[initial] amplitude: must be positive")
            if not self.width > 0:
                raise ConfigError("[initial] width: must be positive")
            if not 0 < self.center < 1:
                raise ConfigError("[initial] center: must lie in (0, 1) as a fraction of the extent")
            if self.mass is not None and not self.mass > 0:
                raise ConfigError("[initial] mass: must be positive when given")
            if not -1 < self.w0_cos_amplitude < 1:
                raise ConfigError("[initial] w0_cos_amplitude: must lie in (-1, 1) to keep w0 > 0")
        if self.name == "perturbed_equilibrium" and not 0 < self.rho < 1:
            raise ConfigError("[initial] rho: must lie in (0, 1)")


@dataclass
class RunConfig:
    grid: Grid
    analysis_n: int
    diffusion: DiffusionSpec
    params: ModelParams
    controls: StepControls
    preset: PresetConfig
    monitor: MonitorConfig
    output_dir: str
    regime_warning: str | None = field(default=None, compare=False)


def build_initial_data(preset: PresetConfig, grid: Grid) -> tuple[InitialData, dict]:
    """Realise a preset on a grid; the echo dict records normalisation and
    the seed so outputs are reproducible."""
    echo: dict = {"preset": preset.name}
    if preset.name == "constant_steady":
        init = InitialData(
            u0=grid.new_field(1.0), v0=grid.new_field(1.0), w0=grid.new_field(preset.w0)
        )
        echo["w0"] = preset.w0
    elif preset.name == "gaussian_bump":
        coords = grid.meshgrid()
        r_sq = sum(
            (coords[d] - preset.center * grid.extents[d]) ** 2 for d in range(grid.dim)
        )
        u0 = preset.amplitude * np.exp(-r_sq / (2.0 * preset.width**2))
        if preset.mass is not None:
            from .grid import integrate

            u0 = u0 * (preset.mass / integrate(u0, grid))
            echo["normalized_mass"] = preset.mass
        w0 = grid.new_field(1.0)
        if preset.w0_cos_amplitude != 0.0:
            mode = grid.new_field(1.0)
            for d in range(grid.dim):
                x = grid.axis_centers(d)
                shape = [1] * grid.dim
                shape[d] = grid.cells[d]
                mode = mode * np.cos(np.pi * x / grid.extents[d]).reshape(shape)
            w0 = w0 + preset.w0_cos_amplitude * mode
        init = InitialData(u0=u0, v0=grid.new_field(0.0), w0=w0)
        echo.update(amplitude=preset.amplitude, width=preset.width,
                    w0_cos_amplitude=preset.w0_cos_amplitude)
    else:  # perturbed_equilibrium
        rng = np.random.default_rng(preset.seed)
        u0 = np.maximum(1.0 + preset.rho * (2.0 * rng.random(grid.shape) - 1.0), 0.0)
        v0 = np.maximum(1.0 + preset.rho * (2.0 * rng.random(grid.shape) - 1.0), 0.0)
        w0 = preset.rho * (0.5 + 0.5 * rng.random(grid.shape))
        init = InitialData(u0=u0, v0=v0, w0=w0)
        echo.update(rho=preset.rho, seed=preset.seed)
    init.validate(grid)
    return init, echo


_KNOWN = {
    "grid": {"dim", "extents", "cells"},
    "analysis": {"n"},
    "diffusion": {"delta", "m", "offset", "epsilon"},
    "params": {"chi", "xi", "mu"},
    "controls": {"cfl_diff", "cfl_adv", "dt_max", "t_end", "sample_every", "blowup_threshold"},
    "initial": {"preset"} | set().union(*_PRESET_KEYS.values()),
    "monitor": {"p_list", "q_list", "s_list", "tolerance", "window_fraction", "growth_tol"},
    "output": {"dir"},
}
_REQUIRED = {
    "grid": {"dim", "extents", "cells"},
    "diffusion": {"delta", "m"},
    "params": {"chi", "xi", "mu"},
}


def _get_float(cp, section, key, default=None):
    if not cp.has_option(section, key):
        return default
    raw = cp.get(section, key)
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"[{section}] {key}: not a number: {raw!r}") from None


def _get_int(cp, section, key, default=None):
    if not cp.has_option(section, key):
        return default
    raw = cp.get(section, key)
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"[{section}] {key}: not an integer: {raw!r}") from None


def _get_float_list(cp, section, key):
    if not cp.has_option(section, key):
        return None
    raw = cp.get(section, key)
    try:
        return tuple(float(tok) for tok in raw.split(","))
    except ValueError:
        raise ConfigError(f"[{section}] {key}: not a comma-separated number list: {raw!r}") from None


def parse_config(text: str) -> RunConfig:
    """Parse and fully validate a run configuration."""
    cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"config syntax error: {exc}") from None

    for section in cp.sections():
        if section not in _KNOWN:
            raise ConfigError(f"unknown section [{section}]")
        for key in cp.options(section):
            if key not in _KNOWN[section]:
                raise ConfigError(f"[{section}] {key}: unknown key")
    for section, keys in _REQUIRED.items():
        if not cp.has_section(section):
            raise ConfigError(f"missing required section [{section}]")
        for key in keys:
            if not cp.has_option(section, key):
                raise ConfigError(f"[{section}] {key}: required key missing")

    dim = _get_int(cp, "grid", "dim")
    extents = _get_float_list(cp, "grid", "extents")
    cells_f = _get_float_list(cp, "grid", "cells")
    if dim not in (1, 2):
        raise ConfigError(f"[grid] dim: must be 1 or 2, got {dim}")
    if len(extents) != dim:
        raise ConfigError(f"[grid] extents: expected {dim} values, got {len(extents)}")
    if len(cells_f) != dim:
        raise ConfigError(f"[grid] cells: expected {dim} values, got {len(cells_f)}")
    cells = tuple(int(c) for c in cells_f)
    if any(c != int(c) for c in cells_f):
        raise ConfigError("[grid] cells: entries must be integers")
    try:
        grid = Grid(extents=extents, cells=cells)
    except ValueError as exc:
        raise ConfigError(f"[grid] {exc}") from None

    n = _get_int(cp, "analysis", "n", default=2)
    if n not in (2, 3, 4):
        raise ConfigError(f"[analysis] n: must be one of 2, 3, 4, got {n}")

    try:
        diffusion = DiffusionSpec(
            delta=_get_float(cp, "diffusion", "delta"),
            m=_get_float(cp, "diffusion", "m"),
            offset=_get_float(cp, "diffusion", "offset", 0.0),
            epsilon=_get_float(cp, "diffusion", "epsilon", 0.0),
        )
    except ValueError as exc:
        raise ConfigError(f"[diffusion] {exc}") from None
    try:
        params = ModelParams(
            chi=_get_float(cp, "params", "chi"),
            xi=_get_float(cp, "params", "xi"),
            mu=_get_float(cp, "params", "mu"),
        )
    except ValueError as exc:
        raise ConfigError(f"[params] {exc}") from None

    threshold_raw = cp.get("controls", "blowup_threshold", fallback="auto").strip()
    threshold = None if threshold_raw == "auto" else float(threshold_raw)
    try:
        controls = StepControls(
            t_end=_get_float(cp, "controls", "t_end", 1.0),
            cfl_diff=_get_float(cp, "controls", "cfl_diff", 0.45),
            cfl_adv=_get_float(cp, "controls", "cfl_adv", 0.1),
            dt_max=_get_float(cp, "controls", "dt_max", math.inf),
            sample_every=_get_float(cp, "controls", "sample_every", 0.1),
            blowup_threshold=threshold,
        )
    except ValueError as exc:
        raise ConfigError(f"[controls] {exc}") from None

    preset_name = cp.get("initial", "preset", fallback="constant_steady")
    if preset_name not in _PRESET_KEYS:
        raise ConfigError(f"[initial] preset: unknown preset {preset_name!r}")
    if cp.has_section("initial"):
        for key in cp.options("initial"):
            if key != "preset" and key not in _PRESET_KEYS[preset_name]:
                raise ConfigError(f"[initial] {key}: not a key of preset {preset_name!r}")
    mass_raw = cp.get("initial", "mass", fallback=None)
    preset = PresetConfig(
        name=preset_name,
        w0=_get_float(cp, "initial", "w0", 1e-12),
        amplitude=_get_float(cp, "initial", "amplitude", 1.0),
        width=_get_float(cp, "initial", "width", 0.1),
        center=_get_float(cp, "initial", "center", 0.5),
        mass=float(mass_raw) if mass_raw is not None else None,
        w0_cos_amplitude=_get_float(cp, "initial", "w0_cos_amplitude", 0.0),
        rho=_get_float(cp, "initial", "rho", 0.1),
        seed=_get_int(cp, "initial", "seed", 0),
    )

    mon_defaults = MonitorConfig.defaults(diffusion.m, n)
    p_list = _get_float_list(cp, "monitor", "p_list") or mon_defaults.p_list
    q_list = _get_float_list(cp, "monitor", "q_list") or mon_defaults.q_list
    s_list = _get_float_list(cp, "monitor", "s_list") or mon_defaults.s_list
    try:
        monitor = MonitorConfig(
            p_list=p_list,
            q_list=q_list,
            s_list=s_list,
            tolerance=_get_float(cp, "monitor", "tolerance", 1e-8),
            window_fraction=_get_float(cp, "monitor", "window_fraction", 0.25),
            growth_tol=_get_float(cp, "monitor", "growth_tol", 0.01),
        )
    except ValueError as exc:
        raise ConfigError(f"[monitor] {exc}") from None

    output_dir = cp.get("output", "dir", fallback="out")

    verdict = validate_regime(diffusion, n)
    warning = None
    if not verdict.within_theorem:
        warning = (
            f"m={diffusion.m} is not above the boundedness threshold "
            f"{verdict.threshold:.6g} for n={n} (margin {verdict.margin:.6g}); "
            "simulation permitted, boundedness not guaranteed"
        )
    return RunConfig(
        grid=grid,
        analysis_n=n,
        diffusion=diffusion,
        params=params,
        controls=controls,
        preset=preset,
        monitor=monitor,
        output_dir=output_dir,
        regime_warning=warning,
    )


def serialize_config(cfg: RunConfig) -> str:
    """Emit a config file that parses back to an equal RunConfig."""
    cp = configparser.ConfigParser()
    cp["grid"] = {
        "dim": str(cfg.grid.dim),
        "extents": ", ".join(repr(e) for e in cfg.grid.extents),
        "cells": ", ".join(str(c) for c in cfg.grid.cells),
    }
    cp["analysis"] = {"n": str(cfg.analysis_n)}
    cp["diffusion"] = {
        "delta": repr(cfg.diffusion.delta),
        "m": repr(cfg.diffusion.m),
        "offset": repr(cfg.diffusion.offset),
        "epsilon": repr(cfg.diffusion.epsilon),
    }
    cp["params"] = {"chi": repr(cfg.params.chi), "xi": repr(cfg.params.xi), "mu": repr(cfg.params.mu)}
    c = cfg.controls
    cp["controls"] = {
        "cfl_diff": repr(c.cfl_diff),
        "cfl_adv": repr(c.cfl_adv),
        "dt_max": repr(c.dt_max),
        "t_end": repr(c.t_end),
        "sample_every": repr(c.sample_every),
        "blowup_threshold": "auto" if c.blowup_threshold is None else repr(c.blowup_threshold),
    }
    p = cfg.preset
    initial = {"preset": p.name}
    if p.name == "constant_steady":
        initial["w0"] = repr(p.w0)
    elif p.name == "gaussian_bump":
        initial.update(
            amplitude=repr(p.amplitude), width=repr(p.width), center=repr(p.center),
            w0_cos_amplitude=repr(p.w0_cos_amplitude),
        )
        if p.mass is not None:
            initial["mass"] = repr(p.mass)
    else:
        initial.update(rho=repr(p.rho), seed=str(p.seed))
    cp["initial"] = initial
    m = cfg.monitor
    cp["monitor"] = {
        "p_list": ", ".join(repr(v) for v in m.p_list),
        "q_list": ", ".join(repr(v) for v in m.q_list),
        "s_list": ", ".join(repr(v) for v in m.s_list),
        "tolerance": repr(m.tolerance),
        "window_fraction": repr(m.window_fraction),
        "growth_tol": repr(m.growth_tol),
    }
    cp["output"] = {"dir": cfg.output_dir}
    buf = io.StringIO()
    cp.write(buf)
    return buf.getvalue()
