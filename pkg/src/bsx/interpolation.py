"""Node-series kernels shared by the base and subordinated approximants.

Everything here works in the rescaled variable ``w`` (nodes at the integers).
The nearest node ``m = rint(Re w)`` is always handled in closed form through
the sinc kernel, so the series never divide by a small ``w - n``.
"""
from __future__ import annotations

import math

import numpy as np

from .base_functions import eval_B, eval_b
from .numerics.special import alternating_hurwitz, trigamma

# Upper bound on the size (points x terms) of one block of the direct sum.
_BLOCK = 2_000_000


def as_points(z):
    """Return (flat array, original shape, is_real) for scalar or array input."""
    arr = np.asarray(z)
    is_real = not np.iscomplexobj(arr)
    flat = arr.astype(float if is_real else complex).ravel()
    if not np.all(np.isfinite(flat)):
        raise ValueError("evaluation points must be finite")
    return flat, arr.shape, is_real


def restore(values, shape, is_real):
    out = np.real(values) if is_real else values
    out = out.reshape(shape)
    return out[()] if out.ndim == 0 else out


def split_nodes(w):
    """Nearest node m, offset r = w - m, and the sign (-1)^m."""
    m = np.rint(np.real(w))
    r = w - m
    sign = np.where(np.mod(m, 2.0) == 0.0, 1.0, -1.0)
    return m, r, sign


def sinc(r):
    """sin(pi r)/(pi r), valid for complex r."""
    r = np.asarray(r)
    small = np.abs(r) < 1e-8
    safe = np.where(small, 1.0, r)
    pr = math.pi * safe
    val = np.sin(pr) / pr
    # second-order Taylor expansion below 1e-8 keeps full precision
    return np.where(small, 1.0 - (math.pi * r) ** 2 / 6.0, val)


def sin_over_pi(r):
    return np.sin(math.pi * np.asarray(r)) / math.pi


def alternating_node_sum(w, m, r, sign):
    """sum_{n >= 1, n != m} (-1)^n / (w - n) where m is the nearest node."""
    out = np.empty_like(w, dtype=complex)
    pos = m >= 1
    if np.any(pos):
        rp, mp, sp = r[pos], m[pos], sign[pos]
        out[pos] = sp * (
            alternating_hurwitz(1.0 - rp)
            - alternating_hurwitz(1.0 + rp)
            - sp * alternating_hurwitz(mp + rp)
        )
    neg = ~pos
    if np.any(neg):
        out[neg] = alternating_hurwitz(1.0 - w[neg])
    return out


def square_node_sum(w, m, r):
    """sum_{n >= 1, n != m} 1 / (w - n)^2 where m is the nearest node."""
    out = np.empty_like(w, dtype=complex)
    pos = m >= 1
    if np.any(pos):
        rp, mp = r[pos], m[pos]
        out[pos] = trigamma(1.0 - rp) + trigamma(1.0 + rp) - trigamma(mp + rp)
    neg = ~pos
    if np.any(neg):
        out[neg] = trigamma(1.0 - w[neg])
    return out


def exponential_terms_needed(mu: float, tol: float, scale: float = 1.0) -> int:
    """Smallest N with e^{-mu N}/(1-e^{-mu}) * 2 * scale <= tol/10."""
    geo = -math.expm1(-mu)
    need = math.log(20.0 * max(scale, 1.0) / (geo * tol)) / mu
    return max(4, int(math.ceil(need)) + 1)


def exponential_node_sums(w, m, mu: float, n_terms: int, second_order: bool):
    """Direct sums over n = 1..n_terms with n != m of e^{-mu n}/(w-n) and,
    when ``second_order``, of e^{-mu n}/(w-n)^2.

    The first sum carries the alternating sign (-1)^n when not ``second_order``.
    """
    n = np.arange(1, n_terms + 1, dtype=float)
    weights = np.exp(-mu * n)
    if not second_order:
        weights = weights * np.where(n % 2 == 0, 1.0, -1.0)
    first = np.zeros(w.shape, dtype=w.dtype)
    second = np.zeros(w.shape, dtype=w.dtype) if second_order else None
    block = max(1, _BLOCK // n_terms)
    for start in range(0, w.size, block):
        sl = slice(start, start + block)
        diff = w[sl, None] - n[None, :]
        hit = m[sl, None] == n[None, :]
        inv = np.where(hit, 0.0, 1.0 / np.where(hit, 1.0, diff))
        first[sl] = inv @ weights
        if second_order:
            second[sl] = (inv * inv) @ weights
    return first, second


def kernel_K(w, mu: float | None, c: float, tol: float):
    """K_{mu,c}(w) = K_mu(w) - c K_0(w); ``mu=None`` drops K_mu (pure step part)."""
    m, r, sign = split_nodes(w)
    s1 = sign * sin_over_pi(r)
    sr = sinc(r)
    wc = w.astype(complex)

    # c-part: -c * sin(pi w)/pi * [A(w) + 1/(2w)], nearest node excluded from A
    alt = alternating_node_sum(wc, m, r.astype(complex), sign)
    acc = -c * s1 * alt
    at_zero = m == 0
    inv_w = np.where(at_zero, 0.0, 1.0 / np.where(at_zero, 1.0, w))
    const = -0.5 * c
    node_val = np.where(m >= 1, -c, 0.0)

    if mu is not None:
        n_terms = exponential_terms_needed(mu, tol, float(np.max(np.abs(s1), initial=1.0)))
        ex, _ = exponential_node_sums(w, m, mu, n_terms, second_order=False)
        acc = acc + s1 * ex
        const = const + float(eval_b(mu))
        with np.errstate(over="ignore", under="ignore"):
            node_val = node_val + np.where(m >= 1, np.exp(-mu * np.maximum(m, 0.0)), 0.0)

    # 1/w block, and the nearest-node term through the sinc kernel
    acc = acc + np.where(at_zero, sr * const, s1 * const * inv_w)
    acc = acc + sr * node_val
    return acc


def kernel_M(w, mu: float | None, c: float, tol: float, minorant: bool):
    """M_{mu,c}(w) = M_mu(w) - c M_0(w), or L_{mu,c} when ``minorant`` is set."""
    m, r, sign = split_nodes(w)
    sr = sinc(r)
    s1r = sin_over_pi(r)
    s2 = s1r * s1r
    wc = w.astype(complex)

    acc = -c * s2 * square_node_sum(wc, m, r.astype(complex))
    at_zero = m == 0
    inv_w = np.where(at_zero, 0.0, 1.0 / np.where(at_zero, 1.0, w))
    c1 = -c  # coefficient of 1/w
    # coefficient of 1/w^2: M_mu contributes 1, -c M_0 contributes -c, and the
    # minorant subtracts the whole (1-c) sinc^2 (or -c sinc^2 for the step part)
    c2 = 0.0 if minorant else (-c if mu is None else 1.0 - c)
    node_val = np.where(m >= 1, -c, 0.0)
    node_der = np.zeros_like(node_val)

    if mu is not None:
        scale = float(np.max(np.abs(s2), initial=1.0)) * max(1.0, mu)
        n_terms = exponential_terms_needed(mu, tol, scale)
        first, second = exponential_node_sums(w, m, mu, n_terms, second_order=True)
        acc = acc + s2 * (second - mu * first)
        c1 = c1 + float(eval_B(-mu))
        with np.errstate(over="ignore", under="ignore"):
            e_m = np.where(m >= 1, np.exp(-mu * np.maximum(m, 0.0)), 0.0)
        node_val = node_val + e_m
        node_der = node_der - mu * e_m

    acc = acc + np.where(at_zero, sr * s1r * c1 + sr * sr * c2, s2 * (c1 * inv_w + c2 * inv_w * inv_w))
    acc = acc + sr * sr * node_val + sr * s1r * node_der
    return acc
