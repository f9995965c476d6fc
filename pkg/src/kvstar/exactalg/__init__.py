"""Exact polynomial, series and linear-algebra kernels."""
from .duality import (
    apply_symbol,
    block_names,
    block_prefixes,
    distribution_times_function,
    pair,
    pair_multi,
    poisson_bracket,
)
from .linalg import nullspace, rank, rref, solve_affine
from .poly import ONE, ZERO, MultiPoly, parse_poly, rational
from .series import (
    TruncSeries,
    matrix_series_det_sqrt,
    series_exp,
    series_inverse,
    series_log,
    series_sqrt,
)

__all__ = [
    "MultiPoly",
    "TruncSeries",
    "parse_poly",
    "rational",
    "ZERO",
    "ONE",
    "series_exp",
    "series_log",
    "series_inverse",
    "series_sqrt",
    "matrix_series_det_sqrt",
    "pair",
    "pair_multi",
    "distribution_times_function",
    "poisson_bracket",
    "apply_symbol",
    "block_names",
    "block_prefixes",
    "rref",
    "rank",
    "nullspace",
    "solve_affine",
]
