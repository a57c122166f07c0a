"""Quadrature, accelerated summation and special-function kernels."""
from .quadrature import (
    QuadResult,
    integrate_finite,
    integrate_semi_infinite,
    integrate_vertical_line,
)
from .series import SumResult, euler_maclaurin_tail, sum_absolute, sum_alternating
from .special import alternating_hurwitz, digamma, trigamma

__all__ = [
    "QuadResult",
    "SumResult",
    "alternating_hurwitz",
    "digamma",
    "euler_maclaurin_tail",
    "integrate_finite",
    "integrate_semi_infinite",
    "integrate_vertical_line",
    "sum_absolute",
    "sum_alternating",
    "trigamma",
]
