"""Uniform one-dimensional grids.

Grid points are cell centers: x_k = x_min + k*dx for k = 0..n_points-1 with
dx = (x_max - x_min)/n_points, so the grid tiles [x_min, x_max) and an array
v sampled on it integrates as dx * sum(v).
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError

MIN_POINTS = 16


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class Grid1D:
    x_min: float
    x_max: float
    n_points: int

    def __post_init__(self):
        if not np.isfinite(self.x_min) or not np.isfinite(self.x_max):
            raise ConfigurationError("grid endpoints must be finite")
        if not self.x_min < self.x_max:
            raise ConfigurationError(
                f"empty grid interval: [{self.x_min}, {self.x_max}]"
            )
        if not isinstance(self.n_points, (int, np.integer)):
            raise ConfigurationError("n_points must be an integer")
        if self.n_points < MIN_POINTS or not _is_power_of_two(self.n_points):
            raise ConfigurationError(
                f"n_points must be a power of two >= {MIN_POINTS}, got {self.n_points}"
            )

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.n_points

    @property
    def points(self) -> np.ndarray:
        cached = getattr(self, "_points", None)
        if cached is None:
            cached = self.x_min + self.dx * np.arange(self.n_points)
            cached.setflags(write=False)
            object.__setattr__(self, "_points", cached)
        return cached

    def close_to(self, other: "Grid1D", rtol: float = 1e-12, atol: float = 1e-12) -> bool:
        """Tolerant grid identity; derived grids may differ by rounding only."""
        scale = max(abs(self.x_min), abs(self.x_max), 1.0)
        return (
            self.n_points == other.n_points
            and abs(self.x_min - other.x_min) <= atol + rtol * scale
            and abs(self.x_max - other.x_max) <= atol + rtol * scale
        )


def make_grid(x_min: float, x_max: float, n_points: int) -> Grid1D:
    """Build a uniform grid; rejects empty intervals and non power-of-two sizes."""
    return Grid1D(float(x_min), float(x_max), int(n_points))
