"""Cell-centered rectangular grids with Neumann ghost handling, quadrature and norms.

Fields are plain ``numpy`` arrays of shape ``grid.shape`` (row-major over
cells). All integrals use the midpoint rule, which is consistent with the
cell-centered second-order stencils in :mod:`chtsim.operators`.
"""
from __future__ import annotations

import io
from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = [
    "Grid",
    "integrate",
    "lp_norm",
    "linf_norm",
    "write_snapshot",
    "read_snapshot",
]


@dataclass(frozen=True)
class Grid:
    """Rectangular domain (0, L1) or (0, L1) x (0, L2), cell-centered."""

    extents: tuple[float, ...]
    cells: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "extents", tuple(float(e) for e in self.extents))
        object.__setattr__(self, "cells", tuple(int(c) for c in self.cells))
        if len(self.extents) != len(self.cells):
            raise ValueError("extents and cells must have matching length")
        if len(self.cells) not in (1, 2):
            raise ValueError("only 1D and 2D grids are supported")
        if any(e <= 0 for e in self.extents):
            raise ValueError("domain extents must be positive")
        if any(c <= 0 for c in self.cells):
            raise ValueError("cell counts must be positive")

    @property
    def dim(self) -> int:
        return len(self.cells)

    @property
    def spacing(self) -> tuple[float, ...]:
        return tuple(L / n for L, n in zip(self.extents, self.cells))

    @property
    def shape(self) -> tuple[int, ...]:
        return self.cells

    @property
    def num_cells(self) -> int:
        return int(np.prod(self.cells))

    @property
    def cell_volume(self) -> float:
        vol = 1.0
        for h in self.spacing:
            vol *= h
        return vol

    @property
    def domain_volume(self) -> float:
        vol = 1.0
        for L in self.extents:
            vol *= L
        return vol

    def axis_centers(self, axis: int) -> np.ndarray:
        """Cell-center coordinates along one axis."""
        h = self.spacing[axis]
        return (np.arange(self.cells[axis]) + 0.5) * h

    def meshgrid(self) -> tuple[np.ndarray, ...]:
        """Cell-center coordinate arrays of shape ``grid.shape``."""
        axes = [self.axis_centers(d) for d in range(self.dim)]
        if self.dim == 1:
            return (axes[0],)
        return tuple(np.meshgrid(*axes, indexing="ij"))

    def new_field(self, fill: float = 0.0) -> np.ndarray:
        return np.full(self.shape, fill, dtype=float)

    def check_field(self, f: np.ndarray) -> None:
        if f.shape != self.shape:
            raise ValueError(f"field shape {f.shape} does not match grid {self.shape}")


def integrate(f: np.ndarray, grid: Grid) -> float:
    """Midpoint-rule integral over the domain: cell volume times the sum."""
    grid.check_field(f)
    return grid.cell_volume * float(np.sum(f))


def lp_norm(f: np.ndarray, p: float, grid: Grid) -> float:
    """Continuum L^p norm, p >= 1, via midpoint quadrature."""
    if p < 1:
        raise ValueError(f"lp_norm requires p >= 1, got {p}")
    grid.check_field(f)
    return float(integrate(np.abs(f) ** p, grid) ** (1.0 / p))


def linf_norm(f: np.ndarray) -> float:
    """Max over cells of the absolute value."""
    return float(np.max(np.abs(f)))


_HEADER_KEYS = ("dim", "extents", "cells")


def write_snapshot(path: str | Path, f: np.ndarray, grid: Grid) -> None:
    """Write one scalar field as CSV: header comments, then row-major rows."""
    grid.check_field(f)
    buf = io.StringIO()
    buf.write(f"# dim={grid.dim}\n")
    buf.write("# extents=" + ",".join(repr(e) for e in grid.extents) + "\n")
    buf.write("# cells=" + ",".join(str(c) for c in grid.cells) + "\n")
    rows = f.reshape(1, -1) if grid.dim == 1 else f
    for row in rows:
        buf.write(",".join(repr(float(v)) for v in row))
        buf.write("\n")
    Path(path).write_text(buf.getvalue())


def read_snapshot(path: str | Path) -> tuple[np.ndarray, Grid]:
    """Read a field CSV written by :func:`write_snapshot`."""
    header: dict[str, str] = {}
    data_rows = []
    for line in Path(path).read_text().splitlines():
        if line.startswith("#"):
            key, _, val = line[1:].strip().partition("=")
            header[key.strip()] = val.strip()
        elif line.strip():
            data_rows.append([float(tok) for tok in line.split(",")])
    for key in _HEADER_KEYS:
        if key not in header:
            raise ValueError(f"snapshot header missing '{key}'")
    extents = tuple(float(tok) for tok in header["extents"].split(","))
    cells = tuple(int(tok) for tok in header["cells"].split(","))
    grid = Grid(extents=extents, cells=cells)
    values = np.asarray(data_rows, dtype=float)
    if grid.dim == 1:
        values = values.reshape(-1)
    if values.shape != grid.shape:
        raise ValueError(f"snapshot data shape {values.shape} does not match header {grid.shape}")
    return values, grid
