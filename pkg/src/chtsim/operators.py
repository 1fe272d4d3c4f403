"""Discrete spatial operators on cell-centered grids, all in flux form.

Boundary faces carry identically zero flux (homogeneous Neumann via ghost
reflection), so the discrete integral of every divergence output telescopes
to zero exactly. Face diffusivities use the arithmetic mean: harmonic
averaging would freeze degenerate fronts next to dry cells.
"""
from __future__ import annotations

import numpy as np

from .grid import Grid
from .model import DiffusionSpec, eval_diffusion

__all__ = [
    "laplacian",
    "diffusion_divergence",
    "taxis_divergence",
    "grad_mag_sq",
    "interior_face_diffs",
]


def _axis_slices(ndim: int, axis: int):
    """(lo, hi) slicers selecting cells left/right of interior faces on ``axis``."""
    lo = [slice(None)] * ndim
    hi = [slice(None)] * ndim
    lo[axis] = slice(None, -1)
    hi[axis] = slice(1, None)
    return tuple(lo), tuple(hi)


def interior_face_diffs(f: np.ndarray, grid: Grid, axis: int) -> np.ndarray:
    """(f_R - f_L) / h on interior faces of one direction."""
    lo, hi = _axis_slices(f.ndim, axis)
    return (f[hi] - f[lo]) / grid.spacing[axis]


def _divergence_add(out: np.ndarray, flux: np.ndarray, grid: Grid, axis: int) -> None:
    """Accumulate (F_right - F_left)/h into ``out`` from interior-face fluxes.

    The same flux array enters with opposite signs in the two adjacent cells,
    so the cell-volume-weighted sum of the contribution is exactly zero.
    """
    lo, hi = _axis_slices(out.ndim, axis)
    h = grid.spacing[axis]
    out[lo] += flux / h
    out[hi] -= flux / h


def laplacian(f: np.ndarray, grid: Grid) -> np.ndarray:
    """3-point (1D) / 5-point (2D) Neumann Laplacian with ghost reflection."""
    grid.check_field(f)
    out = np.zeros_like(f, dtype=float)
    for axis in range(grid.dim):
        _divergence_add(out, interior_face_diffs(f, grid, axis), grid, axis)
    return out


def diffusion_divergence(u: np.ndarray, spec: DiffusionSpec, grid: Grid) -> np.ndarray:
    """div(D(u) grad u) with arithmetic-mean face diffusivities."""
    grid.check_field(u)
    umin = u.min()
    if umin < 0:
        idx = [int(k) for k in np.unravel_index(int(np.argmin(u)), u.shape)]
        raise ValueError(f"diffusion_divergence requires u >= 0; u{idx} = {umin}")
    d = eval_diffusion(spec, u)
    out = np.zeros_like(u, dtype=float)
    for axis in range(grid.dim):
        lo, hi = _axis_slices(u.ndim, axis)
        d_face = 0.5 * (d[lo] + d[hi])
        flux = d_face * interior_face_diffs(u, grid, axis)
        _divergence_add(out, flux, grid, axis)
    return out


def taxis_divergence(u: np.ndarray, psi: np.ndarray, grid: Grid) -> np.ndarray:
    """div(u grad psi) with first-order upwind donor cells.

    Face velocity is (psi_R - psi_L)/h; the donor is u_L for positive
    velocity, u_R otherwise. The caller applies -chi or -xi, under which the
    update is positivity preserving for CFL-admissible dt.
    """
    grid.check_field(u)
    grid.check_field(psi)
    out = np.zeros_like(u, dtype=float)
    for axis in range(grid.dim):
        lo, hi = _axis_slices(u.ndim, axis)
        vel = interior_face_diffs(psi, grid, axis)
        donor = np.where(vel > 0, u[lo], u[hi])
        _divergence_add(out, donor * vel, grid, axis)
    return out


def grad_mag_sq(f: np.ndarray, grid: Grid) -> np.ndarray:
    """Cell-centered |grad f|^2 from central differences.

    Boundary cells use the ghost-reflected central difference, which reduces
    to a one-sided difference over 2h.
    """
    grid.check_field(f)
    out = np.zeros_like(f, dtype=float)
    for axis in range(grid.dim):
        h = grid.spacing[axis]
        g = np.empty_like(f, dtype=float)
        lo = [slice(None)] * f.ndim
        hi = [slice(None)] * f.ndim
        mid = [slice(None)] * f.ndim
        lo[axis] = slice(None, -2)
        hi[axis] = slice(2, None)
        mid[axis] = slice(1, -1)
        g[tuple(mid)] = (f[tuple(hi)] - f[tuple(lo)]) / (2 * h)
        first = [slice(None)] * f.ndim
        second = [slice(None)] * f.ndim
        first[axis] = 0
        second[axis] = 1
        g[tuple(first)] = (f[tuple(second)] - f[tuple(first)]) / (2 * h)
        last = [slice(None)] * f.ndim
        prev = [slice(None)] * f.ndim
        last[axis] = -1
        prev[axis] = -2
        g[tuple(last)] = (f[tuple(last)] - f[tuple(prev)]) / (2 * h)
        out += g * g
    return out
