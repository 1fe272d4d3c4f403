"""Model parameters, the diffusion nonlinearity and regime validation.

The cell-motility diffusivity is restricted to the two-parameter family

    D(s) = d0 + delta * (s + epsilon)**(m - 1)

which realises both the non-degenerate case (d0 > 0 or epsilon > 0) and the
purely degenerate porous-medium case (d0 = epsilon = 0) with a closed-form
derivative, while always dominating delta * s**(m-1).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

__all__ = [
    "DiffusionSpec",
    "ModelParams",
    "RegimeVerdict",
    "eval_diffusion",
    "regularize",
    "validate_regime",
]


@dataclass(frozen=True)
class DiffusionSpec:
    """Diffusivity D(s) = offset + delta * (s + epsilon)**(m - 1)."""

    delta: float
    m: float
    offset: float = 0.0
    epsilon: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.delta) and self.delta > 0):
            raise ValueError(f"delta must be positive, got {self.delta}")
        if not (math.isfinite(self.m) and self.m >= 1.0):
            raise ValueError(f"m must be >= 1, got {self.m}")
        if not (math.isfinite(self.offset) and self.offset >= 0):
            raise ValueError(f"offset must be >= 0, got {self.offset}")
        if not (math.isfinite(self.epsilon) and self.epsilon >= 0):
            raise ValueError(f"epsilon must be >= 0, got {self.epsilon}")

    @property
    def degenerate(self) -> bool:
        """True when D(0) = 0, i.e. no offset and no regularization shift."""
        return self.offset == 0.0 and self.epsilon == 0.0 and self.m > 1.0


@dataclass(frozen=True)
class ModelParams:
    """Nonnegative coupling constants of the system."""

    chi: float = 0.0
    xi: float = 0.0
    mu: float = 0.0

    def __post_init__(self):
        for name in ("chi", "xi", "mu"):
            val = getattr(self, name)
            if not (math.isfinite(val) and val >= 0):
                raise ValueError(f"{name} must be finite and >= 0, got {val}")


@dataclass(frozen=True)
class RegimeVerdict:
    """Outcome of the m > 2 - 2/n check for a given analysis dimension."""

    within_theorem: bool
    threshold: float
    margin: float


def _pow_m_minus_1(s, m: float):
    # special-case the exponents the experiments use; np.power is slow
    e = m - 1.0
    if e == 0.0:
        return np.ones_like(s) if isinstance(s, np.ndarray) else 1.0
    if e == 0.5:
        return np.sqrt(s)
    if e == 1.0:
        return s
    if e == 2.0:
        return np.square(s)
    return np.power(s, e)


def eval_diffusion(spec: DiffusionSpec, s):
    """Evaluate D at a scalar or array s >= 0.

    Returns offset + delta * (s + epsilon)**(m-1); always >= delta * s**(m-1).
    """
    arr = np.asarray(s, dtype=float)
    if np.any(arr < 0):
        raise ValueError("diffusivity argument must be nonnegative")
    out = spec.offset + spec.delta * _pow_m_minus_1(arr + spec.epsilon, spec.m)
    if np.ndim(s) == 0:
        return float(out)
    return out


def regularize(spec: DiffusionSpec, eps: float) -> DiffusionSpec:
    """Return the spec with its regularization shift replaced by eps > 0.

    The regularized diffusivity evaluates as the original D at s + eps, so it
    is strictly positive at s = 0.
    """
    if not (math.isfinite(eps) and eps > 0):
        raise ValueError(f"regularization shift must be positive, got {eps}")
    return replace(spec, epsilon=eps)


def validate_regime(spec: DiffusionSpec, n: int) -> RegimeVerdict:
    """Check m against the boundedness threshold 2 - 2/n for n in {2,3,4}.

    Out-of-regime is a warning state, not an error: runs below the threshold
    are allowed for frontier exploration.
    """
    if n not in (2, 3, 4):
        raise ValueError(f"analysis dimension must be one of 2, 3, 4, got {n}")
    threshold = 2.0 - 2.0 / n
    margin = spec.m - threshold
    return RegimeVerdict(within_theorem=margin > 0, threshold=threshold, margin=margin)
