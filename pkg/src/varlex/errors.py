"""Exception types shared across the package.

The CLI maps these onto exit codes: ConfigError -> 2, HypothesisError in
strict mode -> 3, numerical aborts (Quadrature/Aliasing/Divergence) -> 4.
"""


class VarlexError(Exception):
    """Base class for all package errors."""


class ConfigError(VarlexError):
    """Malformed or schema-invalid run configuration."""


class GridMismatchError(VarlexError):
    """Operands sampled on incompatible grids."""


class ExponentRangeError(VarlexError):
    """An exponent relation produced values outside [1, inf]."""


class HypothesisError(VarlexError):
    """A verifier was asked to run outside its admissible parameter region."""

    def __init__(self, condition: str, detail: str = ""):
        self.condition = condition
        self.detail = detail
        msg = condition if not detail else f"{condition} ({detail})"
        super().__init__(msg)


class QuadratureError(VarlexError):
    """Time quadrature self-check failed (grid too coarse for the kernel)."""


class AliasingError(VarlexError):
    """Kernel mass near the box boundary exceeds the severe threshold."""


class DivergenceError(VarlexError):
    """Fixed-point iteration diverged."""
