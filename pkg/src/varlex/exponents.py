"""Variable exponent functions p(.) with values in [1, inf].

Infinity is represented by the IEEE value numpy.inf; every arithmetic step
that touches it goes through explicit branch logic so the conventions
1/inf = 0 and 1**inf = 0 hold exactly rather than as limits of large floats.

An ExponentField stores samples on a grid together with the analytic bounds
of its descriptor: p_minus / p_plus are the essential inf / sup over the
whole space (the truncation box cannot witness a limit value), and
p_infinity is the radial limit when the descriptor has one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .errors import ExponentRangeError, GridMismatchError, HypothesisError
from .grids import Grid, TimeGrid, require_same_grid

INF = float("inf")

# roundoff repair only: relation arithmetic may land a hair below 1.0
_ONE_SNAP = 1.0 - 1e-12

PRIMITIVE_FAMILIES = (
    "constant",
    "affine_radial",
    "exponential_approach",
    "sinusoidal",
    "piecewise_infinity",
)


def inv(p: Union[float, np.ndarray]):
    """1/p with the convention 1/inf = 0."""
    arr = np.asarray(p, dtype=float)
    out = np.zeros_like(arr)
    finite = np.isfinite(arr)
    out[finite] = 1.0 / arr[finite]
    if out.ndim == 0:
        return float(out)
    return out


def from_inv(v: Union[float, np.ndarray]):
    """Inverse of `inv`: 0 maps back to inf."""
    arr = np.asarray(v, dtype=float)
    out = np.full_like(arr, INF)
    pos = arr > 0
    out[pos] = 1.0 / arr[pos]
    if out.ndim == 0:
        return float(out)
    return out


def conjugate_value(p: Union[float, np.ndarray]):
    """Pointwise conjugate p' with 1' = inf and inf' = 1."""
    arr = np.asarray(p, dtype=float)
    out = np.empty_like(arr)
    is_inf = np.isinf(arr)
    is_one = arr == 1.0
    rest = ~(is_inf | is_one)
    out[is_inf] = 1.0
    out[is_one] = INF
    out[rest] = arr[rest] / (arr[rest] - 1.0)
    if out.ndim == 0:
        return float(out)
    return out


@dataclass(frozen=True)
class Descriptor:
    """Deterministic recipe for an exponent function.

    Primitive families are a closed set; derived descriptors record the
    combination rule and their operands, so any field can be re-evaluated
    bit-identically on any grid.
    """

    family: str
    params: tuple[tuple[str, float], ...] = ()
    operands: tuple["Descriptor", ...] = ()

    @classmethod
    def make(cls, family: str, operands: tuple = (), **params) -> "Descriptor":
        items = tuple(sorted((k, float(v)) for k, v in params.items()))
        return cls(family, items, tuple(operands))

    @property
    def p(self) -> dict:
        return dict(self.params)

    def evaluate(self, coords: np.ndarray) -> np.ndarray:
        """Exponent samples at coords of shape (dim, ...)."""
        d = self.p
        if self.family == "constant":
            return np.full(coords.shape[1:], d["value"])
        if self.family == "affine_radial":
            r1 = np.sum(np.abs(coords), axis=0)
            return d["base"] + d["slope"] * r1
        if self.family == "exponential_approach":
            r = np.sqrt(np.sum(coords * coords, axis=0))
            rate = d.get("rate", 1.0)
            return d["limit"] - d["amplitude"] * np.exp(-rate * r)
        if self.family == "sinusoidal":
            s = np.sum(coords, axis=0)
            return d["base"] + d["amplitude"] * np.abs(np.sin(d.get("freq", 1.0) * s))
        if self.family == "piecewise_infinity":
            r = np.sqrt(np.sum(coords * coords, axis=0))
            out = np.full(coords.shape[1:], INF)
            out[r <= d["radius"]] = d["inner_value"]
            return out
        if self.family == "conjugate":
            return conjugate_value(self.operands[0].evaluate(coords))
        if self.family == "half":
            return self.operands[0].evaluate(coords) / 2.0
        if self.family == "holder_sum":
            a = self.operands[0].evaluate(coords)
            b = self.operands[1].evaluate(coords)
            return from_inv(inv(a) + inv(b))
        if self.family == "young_r":
            a = self.operands[0].evaluate(coords)
            return _young_value(a, d["r"])
        if self.family == "residual":
            a = self.operands[0].evaluate(coords)
            return _residual_value(a, d["p"], d["r"])
        raise ExponentRangeError(f"unknown exponent family {self.family!r}")

    def bounds(self) -> tuple[float, float, Optional[float]]:
        """(p_minus, p_plus, p_infinity); p_infinity None when no limit exists."""
        d = self.p
        if self.family == "constant":
            v = d["value"]
            return v, v, v
        if self.family == "affine_radial":
            if d["slope"] == 0:
                return d["base"], d["base"], d["base"]
            return d["base"], INF, INF
        if self.family == "exponential_approach":
            lim, amp = d["limit"], d["amplitude"]
            if amp > 0:
                return lim - amp, lim, lim
            if amp < 0:
                return lim, lim - amp, lim
            return lim, lim, lim
        if self.family == "sinusoidal":
            amp = d["amplitude"]
            lo = d["base"] + min(0.0, amp)
            hi = d["base"] + max(0.0, amp)
            if amp == 0:
                return lo, hi, d["base"]
            return lo, hi, None
        if self.family == "piecewise_infinity":
            return d["inner_value"], INF, INF
        if self.family == "conjugate":
            lo, hi, pinf = self.operands[0].bounds()
            cinf = None if pinf is None else conjugate_value(pinf)
            return conjugate_value(hi), conjugate_value(lo), cinf
        if self.family == "half":
            lo, hi, pinf = self.operands[0].bounds()
            return lo / 2.0, hi / 2.0, None if pinf is None else pinf / 2.0
        if self.family == "young_r":
            lo, hi, pinf = self.operands[0].bounds()
            vinf = None if pinf is None else _young_value(pinf, d["r"])
            # 1/q = 1 + 1/r - 1/a grows with a, so q is decreasing in a
            return _young_value(hi, d["r"]), _young_value(lo, d["r"]), vinf
        if self.family == "residual":
            lo, hi, pinf = self.operands[0].bounds()
            vinf = None if pinf is None else _residual_value(pinf, d["p"], d["r"])
            # C = r(1 - A/p) is decreasing in A
            return (_residual_value(hi, d["p"], d["r"]),
                    _residual_value(lo, d["p"], d["r"]), vinf)
        if self.family == "holder_sum":
            (alo, ahi, ainf) = self.operands[0].bounds()
            (blo, bhi, binf) = self.operands[1].bounds()
            sinf = None
            if ainf is not None and binf is not None:
                sinf = from_inv(inv(ainf) + inv(binf))
            # interval arithmetic: extrema of the two operands need not be
            # attained at the same point, so these are outer bounds only
            return (from_inv(inv(alo) + inv(blo)),
                    from_inv(inv(ahi) + inv(bhi)), sinf)
        raise ExponentRangeError(f"unknown exponent family {self.family!r}")

    def to_json(self):
        out = {"family": self.family}
        out.update({k: v for k, v in self.params})
        if self.operands:
            out["operands"] = [op.to_json() for op in self.operands]
        return out


def _young_value(a, r: float):
    q_inv = 1.0 + inv(r) - inv(a)
    return from_inv(np.asarray(q_inv)) if np.ndim(a) else from_inv(q_inv)


def _residual_value(a, p: float, r: float):
    val = r * (1.0 - np.asarray(a, dtype=float) / p)
    if np.ndim(a) == 0:
        return float(val)
    return val


@dataclass(frozen=True)
class ExponentField:
    samples: np.ndarray
    p_minus: float
    p_plus: float
    p_infinity: Optional[float]
    grid: Union[Grid, TimeGrid]
    descriptor: Optional[Descriptor] = None

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=float)
        object.__setattr__(self, "samples", s)

    @property
    def has_infinity(self) -> bool:
        return bool(np.any(np.isinf(self.samples)))

    def require_p_infinity(self, context: str) -> float:
        if self.p_infinity is None:
            raise HypothesisError(
                f"{context}: exponent has no limit at infinity",
                "sinusoidal-type exponents have no p_infinity")
        return self.p_infinity

    def describe(self) -> dict:
        out = {
            "p_minus": self.p_minus,
            "p_plus": self.p_plus,
            "p_infinity": self.p_infinity,
        }
        if self.descriptor is not None:
            out["descriptor"] = self.descriptor.to_json()
        return out


def _validate_samples(samples: np.ndarray, what: str) -> np.ndarray:
    if np.any(np.isnan(samples)):
        raise ExponentRangeError(f"{what}: NaN exponent values")
    bad = samples < _ONE_SNAP
    if np.any(bad):
        raise ExponentRangeError(
            f"{what}: exponent dips below 1 (min {samples.min():.6g}); "
            "the relation's hypothesis is violated")
    # snap values within roundoff of 1 back onto the boundary
    near = (samples < 1.0) & ~bad
    if np.any(near):
        samples = samples.copy()
        samples[near] = 1.0
    return samples


def build_exponent(descriptor: Descriptor, grid: Union[Grid, TimeGrid]) -> ExponentField:
    """Sample a descriptor on a grid and attach its analytic bounds."""
    samples = descriptor.evaluate(grid.coords())
    samples = _validate_samples(samples, descriptor.family)
    p_minus, p_plus, p_inf = descriptor.bounds()
    if p_minus < 1.0:
        raise ExponentRangeError(
            f"{descriptor.family}: p_minus = {p_minus:.6g} < 1")
    return ExponentField(samples, p_minus, p_plus, p_inf, grid, descriptor)


def constant_exponent(value: float, grid: Union[Grid, TimeGrid]) -> ExponentField:
    return build_exponent(Descriptor.make("constant", value=value), grid)


def conjugate(p: ExponentField) -> ExponentField:
    """Pointwise conjugate exponent: 1/p + 1/p' = 1 with 1/inf = 0."""
    if p.descriptor is not None:
        return build_exponent(Descriptor.make("conjugate", operands=(p.descriptor,)),
                              p.grid)
    samples = conjugate_value(p.samples)
    cinf = None if p.p_infinity is None else conjugate_value(p.p_infinity)
    return ExponentField(samples, conjugate_value(p.p_plus),
                         conjugate_value(p.p_minus), cinf, p.grid, None)


def combine(relation: str, *operands) -> ExponentField:
    """Combine exponents through one of the documented pointwise relations.

    half(p)            -> p/2
    holder_sum(p, q)   -> s with 1/s = 1/p + 1/q
    young_r(p, r)      -> q with 1/p + 1/q = 1 + 1/r      (r scalar)
    residual(A, p, r)  -> C = r(1 - A/p)                  (p, r scalars)

    Raises ExponentRangeError when the result leaves [1, inf] anywhere,
    which signals that the originating hypothesis fails on this grid.
    """
    if relation == "half":
        (p,) = operands
        desc = None if p.descriptor is None else Descriptor.make(
            "half", operands=(p.descriptor,))
    elif relation == "holder_sum":
        p, q = operands
        require_same_grid(p, q)
        desc = None
        if p.descriptor is not None and q.descriptor is not None:
            desc = Descriptor.make("holder_sum",
                                   operands=(p.descriptor, q.descriptor))
    elif relation == "young_r":
        p, r = operands
        desc = None if p.descriptor is None else Descriptor.make(
            "young_r", operands=(p.descriptor,), r=float(r))
    elif relation == "residual":
        a, pc, rc = operands
        desc = None if a.descriptor is None else Descriptor.make(
            "residual", operands=(a.descriptor,), p=float(pc), r=float(rc))
    else:
        raise ExponentRangeError(f"unknown combine relation {relation!r}")

    first = operands[0]
    if desc is not None:
        return build_exponent(desc, first.grid)

    # descriptor-free fallback: combine raw samples, bounds from samples
    if relation == "half":
        samples = first.samples / 2.0
    elif relation == "holder_sum":
        samples = from_inv(inv(first.samples) + inv(operands[1].samples))
    elif relation == "young_r":
        samples = _young_value(first.samples, float(operands[1]))
    else:
        samples = _residual_value(first.samples, float(operands[1]),
                                  float(operands[2]))
    samples = _validate_samples(samples, relation)
    return ExponentField(samples, float(np.min(samples)), float(np.max(samples)),
                         None, first.grid, None)


@dataclass(frozen=True)
class LogHolderEstimate:
    c_local: float
    c_decay: Optional[float]
    g_infinity: Optional[float]
    pass_local: bool
    pass_decay: Optional[bool]
    pairs_used: int


def log_holder_check(p: ExponentField, pair_budget: int, *, seed: int = 0,
                     threshold: float = 2.0,
                     on_inverse: bool = True) -> LogHolderEstimate:
    """Sampled estimate of the log-Holder constants of g = 1/p (default) or p.

    c_local  = max over sampled pairs of |g(x)-g(y)| * log(e + 1/|x-y|)
    c_decay  = max over nodes of |g(x)-g_inf| * log(e + |x|)

    The modulus condition quantifies over all pairs; this reports the max
    over `pair_budget` seeded pairs plus every axis-adjacent pair (small
    separations dominate the constant).  Pass flags compare to `threshold`.
    """
    grid = p.grid
    if isinstance(grid, TimeGrid):
        coords = grid.coords()
    else:
        coords = grid.coords()
    npoints = p.samples.size
    if npoints < 2:
        raise GridMismatchError("log-Holder check needs at least two nodes")

    g = inv(p.samples) if on_inverse else p.samples
    if not on_inverse and p.has_infinity:
        raise HypothesisError("log_holder_check on p itself requires finite p",
                              "use on_inverse=True for unbounded exponents")
    flat_g = g.reshape(-1)
    flat_x = coords.reshape(coords.shape[0], -1)

    # axis-adjacent pairs: wherever the local modulus is worst
    best = 0.0
    dim = coords.shape[0]
    for ax in range(dim):
        rolled = np.roll(g, -1, axis=ax if g.ndim > 1 else 0)
        diff = np.abs(g - rolled)
        if g.ndim == 1:
            d = np.abs(coords[0] - np.roll(coords[0], -1))
            diff, d = diff[:-1], d[:-1]
        else:
            d = np.full(diff.shape, 0.0)
            step = np.abs(np.diff(coords[ax], axis=ax))
            sl = [slice(None)] * g.ndim
            sl[ax] = slice(0, -1)
            diff = diff[tuple(sl)]
            d = step
        val = diff * np.log(np.e + 1.0 / d)
        best = max(best, float(np.max(val)))

    rng = np.random.default_rng(seed)
    n_pairs = min(int(pair_budget), npoints * (npoints - 1) // 2)
    used = n_pairs
    if npoints <= 4096 and pair_budget >= npoints * (npoints - 1) // 2:
        # exhaustive: all pairs
        ii, jj = np.triu_indices(npoints, k=1)
        used = ii.size
    else:
        ii = rng.integers(0, npoints, size=n_pairs)
        jj = rng.integers(0, npoints, size=n_pairs)
        keep = ii != jj
        ii, jj = ii[keep], jj[keep]
        used = ii.size
    sep = np.sqrt(np.sum((flat_x[:, ii] - flat_x[:, jj]) ** 2, axis=0))
    vals = np.abs(flat_g[ii] - flat_g[jj]) * np.log(np.e + 1.0 / sep)
    if vals.size:
        best = max(best, float(np.max(vals)))

    c_decay = None
    g_inf = None
    pass_decay = None
    if p.p_infinity is not None:
        g_inf = inv(p.p_infinity) if on_inverse else p.p_infinity
        r = np.sqrt(np.sum(flat_x**2, axis=0))
        c_decay = float(np.max(np.abs(flat_g - g_inf) * np.log(np.e + r)))
        pass_decay = c_decay <= threshold

    return LogHolderEstimate(best, c_decay, g_inf, best <= threshold,
                             pass_decay, used)
