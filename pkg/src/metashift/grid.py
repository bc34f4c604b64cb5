"""Uniform interior grid over the hyperparameter space (0, 1).

All one-dimensional optimization (EMRM) and posterior normalization
(IMRM) happens on the same grid so comparisons are resolution-fair.
The grid places G points at the midpoints of G equal cells, so a
density tabulated on the points integrates to ``sum(values) * spacing``
exactly and the endpoints 0 and 1 are never touched.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["HyperGrid", "DEFAULT_GRID_SIZE"]

DEFAULT_GRID_SIZE = 201


@dataclass(frozen=True)
class HyperGrid:
    """Midpoints of ``size`` equal cells partitioning (0, 1)."""

    size: int = DEFAULT_GRID_SIZE
    points: np.ndarray = field(init=False, repr=False, compare=False)
    spacing: float = field(init=False, compare=False)

    def __post_init__(self) -> None:
        if int(self.size) < 3:
            raise ValueError("grid needs at least 3 points")
        object.__setattr__(self, "size", int(self.size))
        spacing = 1.0 / self.size
        pts = (np.arange(self.size) + 0.5) * spacing
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "spacing", spacing)

    def quadrature(self, values) -> float:
        """Midpoint-rule integral over (0, 1) of values tabulated on the grid."""
        return float(np.sum(np.asarray(values, dtype=float)) * self.spacing)

    def cell_edges(self) -> np.ndarray:
        """The size+1 cell boundaries 0, 1/G, ..., 1."""
        return np.arange(self.size + 1) / self.size
