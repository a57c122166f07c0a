"""Accelerated summation of alternating and absolutely convergent series.

Term callbacks are vectorised: ``term(n)`` receives an integer numpy array and
returns the matching array of (real or complex) terms.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import NonConvergence

DEFAULT_TOL = 1e-10
SAFETY = 10.0
FALLBACK_TERMS = 1_000_000
_EPS = np.finfo(float).eps

# B_{2k} / (2k)! for k = 1..10
_EM_COEFFS = (
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
    1.0 / 74724249600.0,
    -3617.0 / 10670622842880000.0,
    43867.0 / 5109094217170944000.0,
    -174611.0 / 802857662698291200000.0,
)


@dataclass(frozen=True)
class SumResult:
    value: complex | float
    abs_err: float
    terms_used: int

    def __post_init__(self):
        if not self.abs_err >= 0.0:
            raise ValueError("abs_err must be non-negative")
        if self.terms_used < 1:
            raise ValueError("terms_used must be positive")


def _scalar(x):
    x = complex(x)
    return x.real if x.imag == 0.0 else x


def _cvz_weights(order: int) -> np.ndarray:
    """Weights w_k with sum_k (-1)^k a_k ~ sum_k w_k a_k (Cohen, Rodriguez Villegas, Zagier)."""
    d = (3.0 + math.sqrt(8.0)) ** order
    d = 0.5 * (d + 1.0 / d)
    b, c = -1.0, -d
    w = np.empty(order)
    for k in range(order):
        c = b - c
        w[k] = c
        b = (k + order) * (k - order) * b / ((k + 0.5) * (k + 1.0))
    return w / d


def _cvz(a: np.ndarray, order: int):
    return np.dot(_cvz_weights(order), a[:order])


def _repeated_average(partials: np.ndarray, rounds: int):
    """Apply pairwise averaging of consecutive partial sums ``rounds`` times."""
    cur = partials
    history = [cur[-1]]
    for _ in range(rounds):
        if cur.size < 2:
            break
        cur = 0.5 * (cur[1:] + cur[:-1])
        history.append(cur[-1])
    return history


def sum_alternating(
    term,
    tol: float = DEFAULT_TOL,
    start: int = 1,
    head: int = 0,
    orders: tuple[int, int] = (28, 40),
) -> SumResult:
    """Sum ``term(n)`` for ``n >= start`` where the terms alternate in sign.

    The first ``head`` terms are summed directly; the remainder is accelerated
    with the CVZ transform at two orders.  If the two orders disagree by more
    than ``tol/SAFETY`` the routine falls back to direct partial sums up to
    ``FALLBACK_TERMS`` followed by repeated averaging.
    """
    tail_start = start + head
    parts = []
    if head > 0:
        n = np.arange(start, tail_start)
        parts = list(np.asarray(term(n)))
    lo, hi = sorted(orders)
    k = np.arange(hi)
    signs = np.where(k % 2 == 0, 1.0, -1.0)
    a = np.asarray(term(tail_start + k)) * signs
    if np.all(np.isfinite(a)):
        v_lo, v_hi = _cvz(a, lo), _cvz(a, hi)
        # CVZ sums sum (-1)^k a_k; a_k already carries the first term's sign
        err = SAFETY * abs(v_hi - v_lo)
        if err <= tol:
            total = math.fsum(np.real(parts)) + v_hi.real
            if np.iscomplexobj(a) or np.iscomplexobj(parts):
                total = complex(total, math.fsum(np.imag(parts)) + v_hi.imag)
            return SumResult(_scalar(total), max(err, _EPS * abs(total)), head + hi)
    return _fallback_alternating(term, tol, start)


def _fallback_alternating(term, tol, start):
    n = np.arange(start, start + FALLBACK_TERMS)
    vals = np.asarray(term(n))
    if not np.all(np.isfinite(vals)):
        raise NonConvergence("non-finite series term")
    partials = np.cumsum(vals[-2 * 64 :])
    partials = partials + (np.sum(vals[: -2 * 64]) if vals.size > 128 else 0.0)
    history = _repeated_average(partials, 40)
    err = SAFETY * abs(history[-1] - history[-2])
    if not err <= tol:
        raise NonConvergence(
            f"alternating series did not reach tol={tol:g} (estimate {err:.3g})"
        )
    return SumResult(_scalar(history[-1]), err, FALLBACK_TERMS)


def sum_absolute(
    term,
    tail_bound,
    tol: float = DEFAULT_TOL,
    start: int = 1,
    tail=None,
    max_terms: int = 10_000_000,
) -> SumResult:
    """Sum an absolutely convergent series by truncation.

    ``tail_bound(N)`` must bound the error committed by stopping after term N.
    By default that error is the full remainder; when a ``tail(N)`` estimate
    of the remainder is supplied, ``tail_bound(N)`` bounds the error of that
    estimate instead.
    """
    n_stop = max(start, 16)
    while tail_bound(n_stop) > tol / SAFETY:
        n_stop *= 2
        if n_stop > max_terms:
            raise NonConvergence(
                f"tail bound above tol={tol:g} after {max_terms} terms"
            )
    n = np.arange(start, n_stop + 1)
    vals = np.asarray(term(n))
    if not np.all(np.isfinite(vals)):
        raise NonConvergence("non-finite series term")
    # sum smallest terms first to limit round-off
    vals = vals[::-1]
    total = math.fsum(np.real(vals))
    if np.iscomplexobj(vals):
        total = complex(total, math.fsum(np.imag(vals)))
    if tail is not None:
        total = total + tail(n_stop)
    err = float(tail_bound(n_stop)) + _EPS * float(np.sum(np.abs(vals)))
    return SumResult(_scalar(total), err, int(n.size))


def euler_maclaurin_tail(integral, derivatives, order: int | None = None):
    """Euler-Maclaurin estimate of sum_{n >= N} f(n).

    ``integral`` is the integral of f over [N, inf); ``derivatives[j]`` is
    f^{(j)}(N) for j = 0, 1, ..., 2*order - 1 (at least f and f').  Returns the
    estimate and the magnitude of the last correction used, a practical error
    proxy when the correction terms are still shrinking.
    """
    derivatives = list(derivatives)
    available = len(derivatives) // 2
    order = available if order is None else min(order, available)
    order = min(order, len(_EM_COEFFS))
    est = integral + 0.5 * derivatives[0]
    last = abs(0.5 * derivatives[0])
    for k in range(1, order + 1):
        corr = _EM_COEFFS[k - 1] * derivatives[2 * k - 1]
        est = est - corr
        last = abs(corr)
    return est, last
