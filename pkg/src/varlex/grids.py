"""Uniform grids on truncated boxes / periodic tori, and sampled fields.

Space is discretized on [-L, L)^n with N nodes per axis at x_i = -L + i*h,
h = 2L/N, so the origin is a node for even N and the quadrature rule is
node value times cell volume h^n.  Frequencies are the angular FFT lattice
xi = (pi/L) * k with k in fftfreq order.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import GridMismatchError

BOUNDARY_MODES = ("periodic", "truncated")


@dataclass(frozen=True)
class Grid:
    dim: int
    n_points: int
    half_width: float
    boundary_mode: str = "periodic"

    def __post_init__(self):
        if self.dim not in (1, 2, 3):
            raise ValueError(f"dim must be 1, 2 or 3, got {self.dim}")
        if self.n_points < 2 or self.n_points % 2:
            raise ValueError("n_points must be even and >= 2")
        if self.half_width <= 0:
            raise ValueError("half_width must be positive")
        if self.boundary_mode not in BOUNDARY_MODES:
            raise ValueError(f"unknown boundary_mode {self.boundary_mode!r}")

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / self.n_points

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.n_points,) * self.dim

    @property
    def cell_volume(self) -> float:
        return self.spacing**self.dim

    @property
    def volume(self) -> float:
        return (2.0 * self.half_width) ** self.dim

    def axis(self) -> np.ndarray:
        return -self.half_width + self.spacing * np.arange(self.n_points)

    def coords(self) -> np.ndarray:
        """Node coordinates, shape (dim, N, ..., N)."""
        axes = np.meshgrid(*([self.axis()] * self.dim), indexing="ij")
        return np.stack(axes)

    def radii(self) -> np.ndarray:
        c = self.coords()
        return np.sqrt(np.sum(c * c, axis=0))

    def freq_axis(self) -> np.ndarray:
        return 2.0 * np.pi * np.fft.fftfreq(self.n_points, d=self.spacing)

    def freqs(self) -> np.ndarray:
        """Angular frequency lattice, shape (dim, N, ..., N), fftfreq order."""
        axes = np.meshgrid(*([self.freq_axis()] * self.dim), indexing="ij")
        return np.stack(axes)

    def freq_magnitude(self) -> np.ndarray:
        f = self.freqs()
        return np.sqrt(np.sum(f * f, axis=0))

    def doubled(self) -> "Grid":
        """Grid covering [-2L, 2L) at the same spacing (linear-convolution range)."""
        return Grid(self.dim, 2 * self.n_points, 2.0 * self.half_width,
                    boundary_mode="truncated")

    def with_points(self, n_points: int) -> "Grid":
        return replace(self, n_points=n_points)


@dataclass(frozen=True)
class TimeGrid:
    """Strictly increasing times in (0, T]; cell j is (t_{j-1}, t_j], t_0 = 0."""

    times: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        if t.ndim != 1 or t.size == 0:
            raise ValueError("times must be a nonempty 1-D array")
        if t[0] <= 0 or np.any(np.diff(t) <= 0):
            raise ValueError("times must be strictly increasing and positive")
        object.__setattr__(self, "times", t)

    @classmethod
    def uniform(cls, horizon: float, n_steps: int) -> "TimeGrid":
        dt = horizon / n_steps
        return cls(dt * np.arange(1, n_steps + 1))

    @property
    def horizon(self) -> float:
        return float(self.times[-1])

    @property
    def n_steps(self) -> int:
        return self.times.size

    def weights(self) -> np.ndarray:
        """Cell widths t_j - t_{j-1}; they partition (0, T] exactly."""
        return np.diff(self.times, prepend=0.0)

    def coords(self) -> np.ndarray:
        return self.times[np.newaxis, :]


@dataclass(frozen=True)
class GridFunction:
    values: np.ndarray
    grid: Grid

    def __post_init__(self):
        v = np.asarray(self.values)
        if v.shape != self.grid.shape:
            raise GridMismatchError(
                f"values shape {v.shape} != grid shape {self.grid.shape}")
        object.__setattr__(self, "values", v)

    def integral(self) -> float:
        return float(np.sum(self.values) * self.grid.cell_volume)

    def abs_integral(self) -> float:
        return float(np.sum(np.abs(self.values)) * self.grid.cell_volume)

    def lp_norm(self, p: float) -> float:
        """Classical L^p norm on the box, p in [1, inf]."""
        a = np.abs(self.values)
        if np.isinf(p):
            return float(a.max())
        return float((np.sum(a**p) * self.grid.cell_volume) ** (1.0 / p))

    def boundary_mass(self, shell_fraction: float = 0.125) -> float:
        """Fraction of the L1 mass sitting in the outer shell of the box."""
        a = np.abs(self.values)
        total = a.sum()
        if total == 0:
            return 0.0
        m = int(round(self.grid.n_points * shell_fraction))
        m = max(m, 1)
        inner = a
        for ax in range(self.grid.dim):
            sl = [slice(None)] * self.grid.dim
            sl[ax] = slice(m, self.grid.n_points - m)
            inner = inner[tuple(sl)]
        return float((total - inner.sum()) / total)

    def __mul__(self, c):
        return GridFunction(self.values * c, self.grid)

    __rmul__ = __mul__

    def __add__(self, other: "GridFunction"):
        require_same_grid(self, other)
        return GridFunction(self.values + other.values, self.grid)

    def __sub__(self, other: "GridFunction"):
        require_same_grid(self, other)
        return GridFunction(self.values - other.values, self.grid)


def require_same_grid(*objs) -> None:
    grids = [o.grid for o in objs]
    first = grids[0]
    for g in grids[1:]:
        if g != first:
            raise GridMismatchError(f"grid mismatch: {g} vs {first}")


@dataclass(frozen=True)
class SpaceTimeField:
    """Time-indexed (vector) samples: values[j, c, x...] at time times[j]."""

    time_grid: TimeGrid
    grid: Grid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.asarray(self.values)
        expected = (self.time_grid.n_steps,)
        if v.ndim != 2 + self.grid.dim or v.shape[0] != expected[0] \
                or v.shape[2:] != self.grid.shape:
            raise GridMismatchError(
                f"values shape {v.shape} incompatible with "
                f"{self.time_grid.n_steps} times x components x {self.grid.shape}")
        object.__setattr__(self, "values", v)

    @property
    def components(self) -> int:
        return self.values.shape[1]

    def slice_magnitude(self, j: int) -> GridFunction:
        """Pointwise Euclidean magnitude over components at time index j."""
        mag = np.sqrt(np.sum(np.abs(self.values[j]) ** 2, axis=0))
        return GridFunction(mag, self.grid)

    def __add__(self, other: "SpaceTimeField"):
        require_same_grid(self, other)
        return SpaceTimeField(self.time_grid, self.grid, self.values + other.values)

    def __sub__(self, other: "SpaceTimeField"):
        require_same_grid(self, other)
        return SpaceTimeField(self.time_grid, self.grid, self.values - other.values)

    def __mul__(self, c):
        return SpaceTimeField(self.time_grid, self.grid, self.values * c)

    __rmul__ = __mul__


def indicator(grid: Grid, lo: float, hi: float, axis: int = 0) -> GridFunction:
    """Characteristic function of the half-open slab lo <= x_axis < hi.

    The half-open convention makes the discrete mass of [a, b) exactly b - a
    whenever a, b are grid nodes.
    """
    x = grid.coords()[axis]
    return GridFunction(((x >= lo) & (x < hi)).astype(float), grid)
