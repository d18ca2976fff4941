"""Spatial and space-time grids for operator and residual work.

The package works on 1D spatial grids; the problems studied here are
effectively one-dimensional along the field axis.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import UsageError


@dataclass(frozen=True)
class GridSpec:
    """Uniform 1D spatial grid with an operator evaluation time ``t``."""

    x_min: float
    x_max: float
    nx: int
    t: float = 0.0

    def __post_init__(self):
        if self.nx < 5:
            raise UsageError(f"grid needs at least 5 points, got nx={self.nx}")
        if not self.x_max > self.x_min:
            raise UsageError(f"grid needs x_max > x_min, got [{self.x_min}, {self.x_max}]")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / (self.nx - 1)

    def points(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.nx)

    def refined(self) -> "GridSpec":
        """Same extent with halved spacing (2*nx - 1 points)."""
        return replace(self, nx=2 * self.nx - 1)


@dataclass(frozen=True)
class SpaceTimeGrid:
    """Uniform (x, t) lattice for finite-difference residual scans."""

    x_min: float
    x_max: float
    nx: int
    t_min: float
    t_max: float
    nt: int

    def __post_init__(self):
        if self.nx < 3 or self.nt < 3:
            raise UsageError(
                f"central stencils need at least 3 points per axis, got nx={self.nx}, nt={self.nt}"
            )
        if not self.x_max > self.x_min:
            raise UsageError(f"grid needs x_max > x_min, got [{self.x_min}, {self.x_max}]")
        if not self.t_max > self.t_min:
            raise UsageError(f"grid needs t_max > t_min, got [{self.t_min}, {self.t_max}]")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / (self.nx - 1)

    @property
    def dt(self) -> float:
        return (self.t_max - self.t_min) / (self.nt - 1)

    def x_points(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.nx)

    def t_points(self) -> np.ndarray:
        return np.linspace(self.t_min, self.t_max, self.nt)

    def refined(self) -> "SpaceTimeGrid":
        """Same extents with both steps halved."""
        return replace(self, nx=2 * self.nx - 1, nt=2 * self.nt - 1)

    @classmethod
    def from_steps(cls, x_min, x_max, dx, t_min, t_max, dt) -> "SpaceTimeGrid":
        nx = int(round((x_max - x_min) / dx)) + 1
        nt = int(round((t_max - t_min) / dt)) + 1
        return cls(x_min=x_min, x_max=x_max, nx=nx, t_min=t_min, t_max=t_max, nt=nt)
