"""Double-exponential quadrature on finite, semi-infinite and vertical-line contours.

Integrands must be vectorised: they receive a numpy array of abscissae and
return an array of the same shape (real or complex).  Every routine refines
the step size by halving, reusing the previous nodes, and stops when ten
times the difference between consecutive levels drops below ``tol``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..errors import DomainError, NonConvergence

DEFAULT_TOL = 1e-10
SAFETY = 10.0
_EPS = np.finfo(float).eps
_HALF_PI = 0.5 * math.pi


@dataclass(frozen=True)
class QuadResult:
    value: complex | float
    abs_err: float
    evals: int

    def __post_init__(self):
        if not self.abs_err >= 0.0:
            raise ValueError("abs_err must be non-negative")
        if self.evals < 1:
            raise ValueError("evals must be positive")


def _finite(values):
    return bool(np.all(np.isfinite(values)))


def _refine(level_sum: Callable[[int], tuple[complex, int]], tol: float, max_level: int):
    """Drive level refinement.

    ``level_sum(level)`` returns the contribution of the nodes that are new at
    ``level`` (weights already include the step h = 2**-level) and the number
    of evaluations spent.
    """
    total, evals = level_sum(0)
    estimate = total
    err = math.inf
    for level in range(1, max_level + 1):
        new, n = level_sum(level)
        evals += n
        # halving h halves the weight of the nodes carried over
        refined = 0.5 * estimate + new
        err = SAFETY * abs(refined - estimate)
        estimate = refined
        floor = 4.0 * SAFETY * _EPS * abs(estimate)
        if level >= 3 and err <= max(tol, floor):
            return estimate, max(err, _EPS * abs(estimate)), evals
    raise NonConvergence(
        f"quadrature did not reach tol={tol:g} (last error estimate {err:.3g})"
    )


def _level_nodes(level: int, t_lo: float, t_hi: float):
    h = 2.0 ** -level
    if level == 0:
        k = np.arange(math.ceil(t_lo), math.floor(t_hi) + 1, dtype=float)
        return k, h
    # odd multiples of h only
    k_lo = math.ceil((t_lo / h - 1.0) / 2.0)
    k_hi = math.floor((t_hi / h - 1.0) / 2.0)
    k = (2.0 * np.arange(k_lo, k_hi + 1, dtype=float) + 1.0) * h
    return k, h


def integrate_finite(f, a: float, b: float, tol: float = DEFAULT_TOL, max_level: int = 10) -> QuadResult:
    """Tanh-sinh quadrature of ``f`` over ``[a, b]``.

    Integrable endpoint singularities are handled; abscissae next to an
    endpoint are computed from the complementary tanh so they never collapse
    onto the endpoint itself.
    """
    if not (math.isfinite(a) and math.isfinite(b)):
        raise DomainError("integrate_finite needs finite limits")
    if a == b:
        return QuadResult(0.0, 0.0, 1)
    if a > b:
        res = integrate_finite(f, b, a, tol, max_level)
        return QuadResult(-res.value, res.abs_err, res.evals)
    half = 0.5 * (b - a)
    t_max = 4.0

    def level_sum(level):
        t, h = _level_nodes(level, -t_max, t_max)
        u = _HALF_PI * np.sinh(t)
        # distance from the nearer endpoint, in units of half
        comp = 2.0 / (1.0 + np.exp(2.0 * np.abs(u)))
        x = np.where(t < 0, a + half * comp, b - half * comp)
        w = h * half * _HALF_PI * np.cosh(t) / np.cosh(u) ** 2
        keep = (x > a) & (x < b) & (w > 0)
        x, w = x[keep], w[keep]
        vals = f(x)
        if not _finite(vals):
            raise NonConvergence("integrand returned non-finite values")
        return np.sum(w * vals), x.size

    value, err, evals = _refine(level_sum, tol, max_level)
    return QuadResult(value, err, evals)


def integrate_semi_infinite(
    f,
    lower: float = 0.0,
    decay: float = 1.0,
    singular_exponent: float = 0.0,
    tol: float = DEFAULT_TOL,
    max_level: int = 10,
) -> QuadResult:
    """Exp-sinh quadrature of ``f`` over ``(lower, inf)``.

    ``decay`` is the exponential rate hint: the abscissae are scaled by
    ``1/decay``.  ``decay=0`` switches to algebraic-tail mode where the node
    range reaches out to about 1e200.  An endpoint singularity
    ``O((t-lower)^-s)`` with ``s = singular_exponent`` in [0, 1) is removed
    exactly by the substitution ``t = lower + scale * u**(1/(1-s))``.
    """
    if not 0.0 <= singular_exponent < 1.0:
        raise DomainError("singular_exponent must lie in [0, 1)")
    if decay < 0.0:
        raise DomainError("decay must be non-negative")
    scale = 1.0 / decay if decay > 0.0 else 1.0
    q = 1.0 / (1.0 - singular_exponent)
    x_reach = 120.0 if decay > 0.0 else 1e200
    u_hi = x_reach ** (1.0 / q)
    u_lo = 1e-300
    t_hi = math.asinh(math.log(u_hi) / _HALF_PI)
    t_lo = -math.asinh(-math.log(u_lo) / _HALF_PI)

    def level_sum(level):
        t, h = _level_nodes(level, t_lo, t_hi)
        u = np.exp(_HALF_PI * np.sinh(t))
        du = h * _HALF_PI * np.cosh(t) * u
        if q == 1.0:
            x_off = scale * u
            jac = scale * du
        else:
            x_off = scale * u ** q
            jac = scale * q * u ** (q - 1.0) * du
        keep = (x_off > 0.0) & np.isfinite(x_off) & (jac > 0.0)
        vals = f(lower + x_off[keep])
        if not _finite(vals):
            raise NonConvergence("integrand returned non-finite values")
        return np.sum(jac[keep] * vals), int(np.count_nonzero(keep))

    value, err, evals = _refine(level_sum, tol, max_level)
    # mass left outside the node range, estimated as |f| times the offset
    x_hi = scale * u_hi ** q
    edge = abs(f(np.array([lower + x_hi]))[0]) * x_hi
    if edge > max(tol, 1e-14 * abs(value)):
        raise NonConvergence("integrand has not decayed at the end of the node range")
    x_lo = scale * u_lo ** q
    if x_lo > 0.0 and lower + x_lo > lower:
        err += abs(f(np.array([lower + x_lo]))[0]) * x_lo
    return QuadResult(value, err, evals)


def integrate_vertical_line(
    g, beta: float, envelope_rate: float, tol: float = DEFAULT_TOL, breakpoints=()
) -> QuadResult:
    """(2 pi i)^-1 times the integral of ``g`` along ``Re(w) = beta``.

    ``g`` must decay like ``exp(-envelope_rate * |Im w|)``.  The line is
    truncated at a height V where the fitted envelope tail falls below
    ``tol/10``; that tail bound is added to the reported error.  Heights in
    ``breakpoints`` (for instance the imaginary part of a nearby pole) split
    the line into separately integrated pieces.
    """
    if not math.isfinite(beta) or float(beta).is_integer():
        raise DomainError("beta must not be an integer: the sine factor has poles on the line")
    if envelope_rate <= 0.0:
        raise DomainError("envelope_rate must be positive")
    probe_v = np.array([1.0, 2.0, 4.0, 8.0, -1.0, -2.0, -4.0, -8.0])
    probe = np.asarray(g(beta + 1j * probe_v))
    const = float(np.max(np.abs(probe) * np.exp(envelope_rate * np.abs(probe_v))))
    const = max(const, 1e-300)
    extra = max((abs(b) for b in breakpoints), default=0.0)
    height = max(8.0, extra + 4.0, math.log(10.0 * const / (envelope_rate * tol)) / envelope_rate)
    tail = 2.0 * const * math.exp(-envelope_rate * height) / envelope_rate / (2.0 * math.pi)

    cuts = sorted({-height, 0.0, height, *(float(b) for b in breakpoints if abs(b) < height)})

    def on_line(v):
        return g(beta + 1j * v)

    value, err, evals = 0.0, tail, probe.size
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        if hi - lo <= 0.0:
            continue
        piece = integrate_finite(on_line, lo, hi, tol=tol / (2.0 * len(cuts)))
        value = value + piece.value
        err += piece.abs_err / (2.0 * math.pi)
        evals += piece.evals
    return QuadResult(value / (2.0 * math.pi), err, evals)
