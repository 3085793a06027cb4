"""Container for a computed spectrum on a detuning grid."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

MODES = ("ideal", "optical", "current")


@dataclass(frozen=True)
class SpectrumCurve:
    detuning_grid: np.ndarray
    values: np.ndarray
    mode: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        grid = np.asarray(self.detuning_grid, dtype=float)
        vals = np.asarray(self.values, dtype=float)
        if self.mode not in MODES:
            raise DomainError(f"unknown spectrum mode {self.mode!r}")
        if grid.shape != vals.shape or grid.ndim != 1:
            raise DomainError("grid and values must be 1-D arrays of equal length")
        if grid.size > 1 and np.any(np.diff(grid) <= 0):
            raise DomainError("detuning grid must be strictly ascending")
        object.__setattr__(self, "detuning_grid", grid)
        object.__setattr__(self, "values", vals)

    @property
    def gaps(self):
        """Indices of grid points whose evaluation failed (stored as NaN)."""
        return np.flatnonzero(~np.isfinite(self.values))

    def argmin(self):
        return int(np.nanargmin(self.values))

    def local_maxima(self):
        v = self.values
        idx = np.flatnonzero((v[1:-1] > v[:-2]) & (v[1:-1] >= v[2:])) + 1
        return idx[np.argsort(v[idx])[::-1]]


def make_grid(lo, hi, points):
    if points < 2:
        raise DomainError("a grid needs at least two points")
    if not hi > lo:
        raise DomainError("grid_max must exceed grid_min")
    return np.linspace(lo, hi, int(points))
