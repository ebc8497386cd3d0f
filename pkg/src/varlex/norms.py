"""Modulars, Luxemburg norms, intersection and mixed space-time norms.

The modular of f against a variable exponent p is

    rho(f) = sum_nodes w_p(x)(|f(x)|) * h^n

with the branch rules  w_p(v) = v**p for finite p,  w_inf(v) = 0 for v <= 1
and inf for v > 1 (so 1**inf = 0, keeping w left-continuous).  The Luxemburg
norm is the smallest lam with rho(f/lam) <= 1, found by bracketing plus
bisection on the non-increasing map lam -> rho(f/lam).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import GridMismatchError, HypothesisError
from .exponents import ExponentField, combine, constant_exponent, inv
from .grids import Grid, GridFunction, SpaceTimeField, TimeGrid

DEFAULT_TOL = 1e-10


def omega_power(v: np.ndarray, p: np.ndarray) -> np.ndarray:
    """Elementwise w_p(v) for v >= 0 with exact infinity branches."""
    v = np.asarray(v, dtype=float)
    p = np.asarray(p, dtype=float)
    out = np.empty(np.broadcast_shapes(v.shape, p.shape))
    v, p = np.broadcast_to(v, out.shape), np.broadcast_to(p, out.shape)
    finite = np.isfinite(p)
    with np.errstate(over="ignore"):
        out[finite] = v[finite] ** p[finite]
    infb = ~finite
    out[infb] = np.where(v[infb] <= 1.0, 0.0, np.inf)
    return out


def modular_weighted(abs_values: np.ndarray, p_samples: np.ndarray,
                     weights) -> float:
    return float(np.sum(omega_power(abs_values, p_samples) * weights))


def modular(f: GridFunction, p: ExponentField) -> float:
    """Variable exponent modular rho_p(f); may be inf."""
    if f.values.shape != p.samples.shape:
        raise GridMismatchError("function and exponent sampled on different grids")
    return modular_weighted(np.abs(f.values), p.samples, f.grid.cell_volume)


def luxemburg_weighted(abs_values: np.ndarray, p_samples: np.ndarray,
                       weights, tol: float = DEFAULT_TOL) -> float:
    """Core Luxemburg solve on raw samples with quadrature weights.

    An infinite modular counts as "> 1", which is exact: the inf branch only
    shrinks the feasible set of lambdas from below.
    """
    a = np.abs(np.asarray(abs_values, dtype=float))
    if not np.all(np.isfinite(a)):
        raise ValueError("Luxemburg norm needs finite sample values")
    if not np.any(a > 0):
        return 0.0
    if tol <= 0:
        raise ValueError("tol must be positive")

    def rho(lam: float) -> float:
        return modular_weighted(a / lam, p_samples, weights)

    lam_hi = max(1.0, float(a.max()))
    for _ in range(600):
        if rho(lam_hi) <= 1.0:
            break
        lam_hi *= 2.0
    else:  # pragma: no cover - unreachable for finite inputs
        raise ArithmeticError("failed to bracket the Luxemburg norm from above")

    lam_lo = lam_hi / 2.0
    floor = max(np.finfo(float).tiny * 1e20, tol * 1e-8)
    while rho(lam_lo) <= 1.0:
        lam_hi = lam_lo
        lam_lo /= 2.0
        if lam_lo < floor:
            return lam_hi
    while (lam_hi - lam_lo) > tol * lam_hi:
        mid = 0.5 * (lam_hi + lam_lo)
        if rho(mid) <= 1.0:
            lam_hi = mid
        else:
            lam_lo = mid
    # lam_hi is always feasible: rho(f/lam_hi) <= 1 exactly
    return lam_hi


def luxemburg_norm(f: GridFunction, p: ExponentField,
                   tol: float = DEFAULT_TOL) -> float:
    if f.values.shape != p.samples.shape:
        raise GridMismatchError("function and exponent sampled on different grids")
    return luxemburg_weighted(np.abs(f.values), p.samples, f.grid.cell_volume, tol)


def unit_ball_check(f: GridFunction, p: ExponentField,
                    tol: float = DEFAULT_TOL) -> tuple[bool, bool]:
    """(||f|| <= 1, rho(f) <= 1); the pair agrees away from the boundary."""
    return luxemburg_norm(f, p, tol) <= 1.0, modular(f, p) <= 1.0


def intersection_norm(f: GridFunction, pA: ExponentField, pB: ExponentField,
                      tol: float = DEFAULT_TOL) -> float:
    """max of the two Luxemburg norms (norm of X cap Y)."""
    return max(luxemburg_norm(f, pA, tol), luxemburg_norm(f, pB, tol))


def mixed_norm(u: SpaceTimeField, p_t: ExponentField, q_x: ExponentField,
               tol: float = DEFAULT_TOL) -> float:
    """Temporal Luxemburg norm of the per-slice spatial Luxemburg norms."""
    if not isinstance(p_t.grid, TimeGrid) or p_t.samples.shape != (u.time_grid.n_steps,):
        raise GridMismatchError("p_t must live on the field's time grid")
    if q_x.samples.shape != u.grid.shape:
        raise GridMismatchError("q_x must live on the field's spatial grid")
    slice_norms = np.array([
        luxemburg_weighted(np.abs(u.slice_magnitude(j).values), q_x.samples,
                           u.grid.cell_volume, tol)
        for j in range(u.time_grid.n_steps)
    ])
    return luxemburg_weighted(slice_norms, p_t.samples,
                              u.time_grid.weights(), tol)


@dataclass(frozen=True)
class RatioReport:
    lhs: float
    rhs: float
    ratio: Optional[float]
    skipped: bool = False
    note: str = ""


def holder_check(f: GridFunction, g: GridFunction, p: ExponentField,
                 q: ExponentField, tol: float = DEFAULT_TOL) -> RatioReport:
    """Ratio ||fg||_s / (||f||_p ||g||_q) with 1/s = 1/p + 1/q."""
    s = combine("holder_sum", p, q)
    lhs = luxemburg_norm(GridFunction(f.values * g.values, f.grid), s, tol)
    nf = luxemburg_norm(f, p, tol)
    ng = luxemburg_norm(g, q, tol)
    if nf == 0.0 or ng == 0.0:
        return RatioReport(lhs, 0.0, None, skipped=True, note="zero factor")
    return RatioReport(lhs, nf * ng, lhs / (nf * ng))


def minkowski_integral_check(F: np.ndarray, y_weights: Sequence[float],
                             p: ExponentField, grid: Grid,
                             tol: float = DEFAULT_TOL) -> RatioReport:
    """Ratio ||int F(.,y) dy||_p / int ||F(.,y)||_p dy on sampled slices.

    F has shape (n_y, *grid.shape); y_weights are the y-quadrature weights.
    """
    w = np.asarray(y_weights, dtype=float)
    if F.shape[0] != w.size or F.shape[1:] != grid.shape:
        raise GridMismatchError("F slices incompatible with grid/weights")
    integral = np.tensordot(w, F, axes=(0, 0))
    lhs = luxemburg_weighted(np.abs(integral), p.samples, grid.cell_volume, tol)
    rhs = float(sum(
        wj * luxemburg_weighted(np.abs(F[j]), p.samples, grid.cell_volume, tol)
        for j, wj in enumerate(w)))
    if rhs == 0.0:
        return RatioReport(lhs, rhs, None, skipped=True, note="zero integrand")
    return RatioReport(lhs, rhs, lhs / rhs)


@dataclass(frozen=True)
class OneInLsResult:
    value: float
    stabilized: bool
    diverged: bool
    grown_value: float


def one_in_Ls(s: ExponentField, growth: float = 1.5,
              stability_rtol: float = 5e-3,
              tol: float = DEFAULT_TOL) -> OneInLsResult:
    """Luxemburg norm of the constant function 1 on the truncation box.

    The norm is recomputed on a box enlarged by `growth` (same spacing);
    if it keeps growing the constant is not integrable and inf is reported.
    """
    grid = s.grid
    if not isinstance(grid, Grid):
        raise GridMismatchError("one_in_Ls expects a spatial exponent field")
    ones = np.ones(grid.shape)
    v1 = luxemburg_weighted(ones, s.samples, grid.cell_volume, tol)
    if s.descriptor is None:
        raise HypothesisError("one_in_Ls needs a descriptor-backed exponent",
                              "box growth requires re-evaluation")
    n2 = int(2 * round(grid.n_points * growth / 2))
    big = Grid(grid.dim, n2, grid.half_width * n2 / grid.n_points,
               boundary_mode=grid.boundary_mode)
    s2 = s.descriptor.evaluate(big.coords())
    v2 = luxemburg_weighted(np.ones(big.shape), s2, big.cell_volume, tol)
    if v2 > v1 * (1.0 + stability_rtol):
        return OneInLsResult(float("inf"), False, True, v2)
    return OneInLsResult(v1, abs(v2 - v1) <= stability_rtol * v1, False, v2)


def embedding_ratio(f: GridFunction, p: ExponentField, q: ExponentField,
                    one_norm_s: float, tol: float = DEFAULT_TOL) -> Optional[float]:
    """||f||_p / (2 ||1||_s ||f||_q) for p <= q; should be <= 1."""
    nq = luxemburg_norm(f, q, tol)
    if nq == 0.0:
        return None
    return luxemburg_norm(f, p, tol) / (2.0 * one_norm_s * nq)


def lp_norm_constant(f: GridFunction, p: float) -> float:
    """Closed-form discrete L^p norm used as the constant-exponent oracle."""
    return f.lp_norm(p)


def separable_mixed_oracle(a_values: np.ndarray, time_grid: TimeGrid, p: float,
                           g: GridFunction, q: float) -> float:
    """||a||_{L^p(0,T)} * ||g||_{L^q} for separable u = a(t) g(x), constants."""
    w = time_grid.weights()
    if np.isinf(p):
        na = float(np.max(np.abs(a_values)))
    else:
        na = float((np.sum(np.abs(a_values) ** p * w)) ** (1.0 / p))
    return na * g.lp_norm(q)
