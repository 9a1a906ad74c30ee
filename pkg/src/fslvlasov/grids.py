"""Uniform 1D grids with periodic or natural (clamped-derivative) closure."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

PERIODIC = "periodic"
NATURAL = "natural"


@dataclass(frozen=True)
class UniformGrid1D:
    """Uniform grid on [xmin, xmax] with n_cells cells.

    Periodic grids own n_cells distinct nodes (the right endpoint is
    identified with the left one); natural grids own n_cells + 1 nodes.
    ``deriv_lo``/``deriv_hi`` are the prescribed end derivatives used by
    the natural spline closure (ignored for periodic grids).
    """

    xmin: float
    xmax: float
    n_cells: int
    bc: str = PERIODIC
    deriv_lo: float = 0.0
    deriv_hi: float = 0.0

    def __post_init__(self):
        if not self.xmax > self.xmin:
            raise ValueError(f"xmax must exceed xmin, got [{self.xmin}, {self.xmax}]")
        if self.n_cells < 4:
            raise ValueError(f"need at least 4 cells, got {self.n_cells}")
        if self.bc not in (PERIODIC, NATURAL):
            raise ValueError(f"unknown boundary kind {self.bc!r}")

    @property
    def periodic(self) -> bool:
        return self.bc == PERIODIC

    @property
    def length(self) -> float:
        return self.xmax - self.xmin

    @property
    def delta(self) -> float:
        return (self.xmax - self.xmin) / self.n_cells

    @property
    def n_nodes(self) -> int:
        return self.n_cells if self.periodic else self.n_cells + 1

    def nodes(self) -> np.ndarray:
        return self.xmin + self.delta * np.arange(self.n_nodes)

    def to_units(self, x):
        """Map physical coordinates to grid units (node i sits at u = i).

        Periodic coordinates are wrapped into [0, n_cells); natural ones are
        returned as-is (callers decide how to treat out-of-range points).
        """
        u = (np.asarray(x, dtype=float) - self.xmin) / self.delta
        if self.periodic:
            n = self.n_cells
            u = u - n * np.floor(u / n)
            # guard the half-open interval against round-off at the seam
            u = np.where(u >= n, u - n, u)
        return u

    def wrap(self, x):
        """Wrap physical coordinates into [xmin, xmax) (periodic grids only)."""
        L = self.length
        return self.xmin + np.mod(np.asarray(x, dtype=float) - self.xmin, L)
