"""Kernels and spectral multipliers: the decaying profile eta_{t,m}, the
fractional heat kernel and its derivative, the projected-divergence (Oseen)
symbol, and a product-integration Riesz potential in one dimension.

All operators act as discrete Fourier multipliers on the torus lattice, so
no transform-convention constants enter the semigroup.  Physical kernels are
recovered by inverse FFT scaled so the discrete integral of the kernel
equals the multiplier value at frequency zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import AliasingError, GridMismatchError, HypothesisError
from .grids import Grid, GridFunction, require_same_grid

KERNEL_KINDS = ("eta", "heat", "heat_derivative", "oseen_component", "riesz")


@dataclass(frozen=True)
class KernelSpec:
    kind: str
    alpha: Optional[float] = None
    t: Optional[float] = None
    m: Optional[float] = None
    kappa: Optional[float] = None
    component: Optional[tuple[int, int, int]] = None
    beta: Optional[float] = None

    def validate(self, dim: int) -> None:
        if self.kind not in KERNEL_KINDS:
            raise HypothesisError(f"unknown kernel kind {self.kind!r}")
        if self.kind == "eta" and (self.m is None or self.m <= dim):
            raise HypothesisError("eta kernel requires m > n",
                                  f"m={self.m}, n={dim}")
        if self.kind in ("heat", "heat_derivative", "oseen_component"):
            if self.alpha is None or self.alpha <= 0:
                raise HypothesisError("dissipation order alpha must be positive")
        if self.kind == "heat_derivative" and (self.kappa is None or self.kappa <= 0):
            raise HypothesisError("derivative order kappa must be positive")
        if self.kind == "riesz" and not (self.beta is not None
                                         and 0 < self.beta < dim):
            raise HypothesisError("riesz order beta must lie in (0, n)")


def sample_eta(t: float, m: float, grid: Grid) -> GridFunction:
    """eta_{t,m}(x) = t^{-n} (1 + |x|/t)^{-m}, integrable iff m > n."""
    if m <= grid.dim:
        raise HypothesisError("eta kernel requires m > n",
                              f"m={m} <= n={grid.dim} is not integrable")
    if t <= 0:
        raise HypothesisError("eta kernel requires t > 0")
    r = grid.radii()
    vals = t ** (-grid.dim) * (1.0 + r / t) ** (-m)
    return GridFunction(vals, grid)


def eta_l1_on_box(t: float, m: float, half_width: float) -> float:
    """Exact integral of eta_{t,m} over [-L, L] in one dimension."""
    u = half_width / t
    return 2.0 * (1.0 - (1.0 + u) ** (1.0 - m)) / (m - 1.0)


def heat_multiplier(alpha: float, t: float, grid: Grid) -> np.ndarray:
    """exp(-t |xi|^{2 alpha}) on the frequency lattice; equals 1 at xi = 0."""
    if t < 0:
        raise HypothesisError("heat multiplier requires t >= 0")
    xi = grid.freq_magnitude()
    return np.exp(-t * xi ** (2.0 * alpha))


def derivative_heat_multiplier(alpha: float, t: float, kappa: float,
                               grid: Grid) -> np.ndarray:
    """|xi|^kappa exp(-t |xi|^{2 alpha})."""
    xi = grid.freq_magnitude()
    return xi**kappa * np.exp(-t * xi ** (2.0 * alpha))


def sample_heat_kernel(alpha: float, t: float, grid: Grid,
                       alias_abort: Optional[float] = None) -> GridFunction:
    """Physical-space fractional heat kernel with discrete integral 1."""
    if t <= 0:
        raise HypothesisError("kernel sampling requires t > 0")
    mult = heat_multiplier(alpha, t, grid)
    vals = np.real(np.fft.ifftn(mult)) / grid.cell_volume
    kernel = GridFunction(np.fft.fftshift(vals), grid)
    if alias_abort is not None:
        mass = kernel.boundary_mass()
        if mass > alias_abort:
            raise AliasingError(
                f"kernel boundary mass {mass:.3e} exceeds {alias_abort:.1e}; "
                "enlarge the box relative to t**(1/(2 alpha))")
    return kernel


def sample_derivative_heat_kernel(alpha: float, t: float, kappa: float,
                                  grid: Grid) -> GridFunction:
    if t <= 0:
        raise HypothesisError("kernel sampling requires t > 0")
    mult = derivative_heat_multiplier(alpha, t, kappa, grid)
    vals = np.real(np.fft.ifftn(mult)) / grid.cell_volume
    return GridFunction(np.fft.fftshift(vals), grid)


def oseen_projector_factor(j: int, h: int, k: int, grid: Grid) -> np.ndarray:
    """i xi_k (delta_{jh} - xi_j xi_h / |xi|^2), zero at xi = 0.

    This is the time-independent part of the projected-divergence symbol;
    the zero mode carries no divergence and is annihilated by i xi_k anyway.
    """
    if grid.dim < 2:
        raise HypothesisError("projected-divergence symbol requires n >= 2",
                              "divergence-free structure degenerates in 1-D")
    xi = grid.freqs()
    xi2 = np.sum(xi * xi, axis=0)
    safe = np.where(xi2 == 0.0, 1.0, xi2)
    proj = (1.0 if j == h else 0.0) - xi[j] * xi[h] / safe
    out = 1j * xi[k] * proj
    out[(xi2 == 0.0)] = 0.0
    return out


def oseen_multiplier(alpha: float, t: float, j: int, h: int, k: int,
                     grid: Grid) -> np.ndarray:
    """Symbol of the heat-flow projected divergence, component (j; h, k)."""
    return oseen_projector_factor(j, h, k, grid) * heat_multiplier(alpha, t, grid)


def sample_oseen_kernel(alpha: float, t: float, j: int, h: int, k: int,
                        grid: Grid) -> GridFunction:
    vals = np.fft.ifftn(oseen_multiplier(alpha, t, j, h, k, grid))
    return GridFunction(np.fft.fftshift(np.real(vals)) / grid.cell_volume, grid)


def pointwise_bound_check(kernel: GridFunction, bound: GridFunction) -> float:
    """Measured constant C_hat = max_x |kernel(x)| / bound(x)."""
    require_same_grid(kernel, bound)
    b = bound.values
    if np.any(b <= 0):
        raise ValueError("bound must be strictly positive")
    return float(np.max(np.abs(kernel.values) / b))


def circular_convolve(f: GridFunction, g: GridFunction) -> GridFunction:
    """Convolution on the torus via the FFT, weighted by the cell volume."""
    require_same_grid(f, g)
    vals = np.fft.ifftn(np.fft.fftn(f.values) * np.fft.fftn(g.values))
    return GridFunction(np.real(vals) * f.grid.cell_volume, f.grid)


def linear_convolve(f: GridFunction, g: GridFunction) -> GridFunction:
    """Zero-padded (whole-space) convolution; the result lives on the
    doubled box [-2L, 2L) at the same spacing, which contains the full
    support of f*g for box-supported inputs."""
    require_same_grid(f, g)
    grid = f.grid
    n = grid.n_points
    shape = (2 * n,) * grid.dim
    fv = np.fft.fftn(f.values, s=shape)
    gv = np.fft.fftn(g.values, s=shape)
    conv = np.real(np.fft.ifftn(fv * gv)) * grid.cell_volume
    # index j of the padded result corresponds to offset (-2L) + j h
    conv = np.roll(conv, n, axis=tuple(range(grid.dim)))
    return GridFunction(conv, grid.doubled())


def riesz_potential_1d(f_values: np.ndarray, gamma: float,
                       times: np.ndarray) -> np.ndarray:
    """R_gamma f(t) = int_0^T |t-s|^{-(1-gamma)} f(s) ds, 0 < gamma < 1.

    Product integration: f is piecewise constant on the cells (t_{j-1}, t_j]
    and the singular kernel is integrated exactly per cell, so the diagonal
    singularity costs no accuracy.
    """
    if not (0.0 < gamma < 1.0):
        raise HypothesisError("riesz order gamma must lie in (0, 1)",
                              f"gamma={gamma}")
    t = np.asarray(times, dtype=float)
    f = np.asarray(f_values, dtype=float)
    if f.shape[0] != t.size:
        raise GridMismatchError("f must be sampled at the time nodes")
    edges = np.concatenate(([0.0], t))

    def antideriv(u: np.ndarray) -> np.ndarray:
        return np.sign(u) * np.abs(u) ** gamma / gamma

    # W[i, j] = int over cell j of |t_i - s|^{-(1-gamma)} ds
    ti = t[:, None]
    upper = antideriv(ti - edges[None, :-1])
    lower = antideriv(ti - edges[None, 1:])
    W = upper - lower
    return W @ f


def riesz_constant_oracle(gamma: float, horizon: float,
                          times: np.ndarray) -> np.ndarray:
    """Closed form of R_gamma applied to f = 1: (t^g + (T-t)^g) / g."""
    t = np.asarray(times, dtype=float)
    return (t**gamma + (horizon - t) ** gamma) / gamma
