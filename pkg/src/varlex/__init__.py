"""varlex: variable-exponent Lebesgue norms, convolution-inequality
verification, and a fractional Navier-Stokes mild-solution lab on
truncated/periodic grids."""

__version__ = "0.1.0"
