"""Complex digamma, trigamma and the alternating Hurwitz-type sum.

All routines are vectorised over numpy arrays and are intended for arguments
in the half plane ``Re(w) >= 0.25``; the node-series code only ever calls them
there.  Accuracy is close to binary64 round-off in that region.
"""
from __future__ import annotations

import numpy as np

from ..errors import DomainError

# Recurrence shifts the argument to Re(w) >= _SHIFT_TO before the
# asymptotic expansion is used.
_SHIFT_TO = 16.0

# B_{2k} / (2k) for the digamma expansion, k = 1..8.
_DIGAMMA_COEFFS = (
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
    -3617.0 / 8160.0,
)

# B_{2k} for the trigamma expansion, k = 1..8.
_TRIGAMMA_COEFFS = (
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
)


def _prepare(w):
    w = np.asarray(w, dtype=complex)
    if np.any(w.real < 0.25):
        raise DomainError("argument must satisfy Re(w) >= 0.25")
    return w


def _shift_counts(w):
    return np.maximum(0, np.ceil(_SHIFT_TO - w.real)).astype(int)


def digamma(w):
    """psi(w) for complex w with Re(w) >= 0.25."""
    w = _prepare(w)
    shifts = _shift_counts(w)
    acc = np.zeros_like(w)
    cur = w.copy()
    for j in range(int(shifts.max(initial=0))):
        active = shifts > j
        acc = np.where(active, acc - 1.0 / cur, acc)
        cur = np.where(active, cur + 1.0, cur)
    inv2 = 1.0 / (cur * cur)
    series = np.zeros_like(cur)
    for coeff in reversed(_DIGAMMA_COEFFS):
        series = (series + coeff) * inv2
    return acc + np.log(cur) - 0.5 / cur - series


def trigamma(w):
    """psi'(w) = sum_{k>=0} 1/(w+k)^2 for complex w with Re(w) >= 0.25."""
    w = _prepare(w)
    shifts = _shift_counts(w)
    acc = np.zeros_like(w)
    cur = w.copy()
    for j in range(int(shifts.max(initial=0))):
        active = shifts > j
        acc = np.where(active, acc + 1.0 / (cur * cur), acc)
        cur = np.where(active, cur + 1.0, cur)
    inv = 1.0 / cur
    inv2 = inv * inv
    series = np.zeros_like(cur)
    for coeff in reversed(_TRIGAMMA_COEFFS):
        series = (series + coeff) * inv2
    return acc + inv + 0.5 * inv2 + series * inv


def alternating_hurwitz(s):
    """sum_{k>=0} (-1)^k / (k + s) for Re(s) >= 0.5.

    Uses the digamma half-argument identity
    ``(psi((s+1)/2) - psi(s/2)) / 2``.
    """
    s = np.asarray(s, dtype=complex)
    if np.any(s.real < 0.5):
        raise DomainError("argument must satisfy Re(s) >= 0.5")
    return 0.5 * (digamma(0.5 * (s + 1.0)) - digamma(0.5 * s))
