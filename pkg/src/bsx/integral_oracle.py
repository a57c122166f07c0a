"""Independent evaluation paths used to cross-check the interpolation series.

Two families are provided: Laplace-type integral representations of
K_lambda - E_lambda and M_lambda - E_lambda on the real line, and the
vertical-line integral I_k(beta, Phi; z) whose jump across the line recovers
the interpolation series F_k(Phi; z).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .base_functions import eval_B, eval_b
from .errors import DomainError
from .interpolation import as_points, kernel_K, kernel_M, restore, sin_over_pi, sinc
from .numerics.quadrature import QuadResult, integrate_semi_infinite, integrate_vertical_line

DEFAULT_TOL = 1e-12


def _check_point(lambda_: float, x: float):
    if not lambda_ >= 0.0:
        raise DomainError("lambda must be non-negative")
    if x == 0.0 or not math.isfinite(x):
        raise DomainError("the integral representation needs a finite nonzero x")


def _laplace_difference(fn, lambda_: float, x: float, tol: float) -> QuadResult:
    """Integral over w>0 of {fn(lambda+w)-fn(lambda)} e^{xw} (x<0), or
    of {fn(lambda)-fn(lambda-t)} e^{-xt} (x>0)."""
    f0 = fn(lambda_)
    if x < 0:
        rate = -x
        integrand = lambda w: (fn(lambda_ + w) - f0) * np.exp(x * w)
    else:
        rate = x
        integrand = lambda t: (f0 - fn(lambda_ - t)) * np.exp(-x * t)
    return integrate_semi_infinite(integrand, lower=0.0, decay=rate, tol=tol)


def oracle_K_diff(lambda_: float, x: float, tol: float = DEFAULT_TOL) -> float:
    """K_lambda(x) - E_lambda(x) from its Laplace-type integral representation."""
    x = float(x)
    _check_point(lambda_, x)
    if x.is_integer():
        return 0.0
    res = _laplace_difference(eval_b, lambda_, x, tol)
    return float(sin_over_pi(x) * res.value)


def oracle_M_diff(lambda_: float, x: float, tol: float = DEFAULT_TOL) -> float:
    """M_lambda(x) - E_lambda(x) from its Laplace-type integral representation."""
    x = float(x)
    _check_point(lambda_, x)
    if x.is_integer():
        return 0.0
    res = _laplace_difference(eval_B, lambda_, x, tol)
    return float(sin_over_pi(x) ** 2 * res.value)


def sign_integrand_K(lambda_, w):
    """e^{-lambda} g(lambda, w) with g = e^l b(l+w) - e^l b(l) - b(w) + b(0)."""
    lambda_ = np.asarray(lambda_, dtype=float)
    w = np.asarray(w, dtype=float)
    g = np.exp(lambda_) * (eval_b(lambda_ + w) - eval_b(lambda_)) - eval_b(w) + 0.5
    return np.exp(-lambda_) * g


def sign_integrand_M(lambda_, w):
    """e^{-lambda} g(lambda, w) with g = e^l B(l+w) - e^l B(l) - B(w) + 1 - w(e^l - 1)."""
    lambda_ = np.asarray(lambda_, dtype=float)
    w = np.asarray(w, dtype=float)
    el = np.exp(lambda_)
    g = el * (eval_B(lambda_ + w) - eval_B(lambda_)) - eval_B(w) + 1.0 - w * np.expm1(lambda_)
    return np.exp(-lambda_) * g


@dataclass(frozen=True)
class ExponentialTarget:
    """Phi(w) = e^{-a lambda w} - e^{-lambda} on the right half plane.

    Carries what the contour machinery needs: the analytic values, and the
    interpolation series F_k in closed form.
    """

    lambda_: float
    a: float = 1.0

    @property
    def mu(self) -> float:
        return self.a * self.lambda_

    @property
    def shift(self) -> float:
        return math.exp(-self.lambda_)

    def __call__(self, w):
        w = np.asarray(w, dtype=complex)
        return np.exp(-self.mu * w) - self.shift

    def series(self, k: int, z, tol: float = 1e-13):
        """F_k(Phi; z): the interpolation series over the nodes n >= 1."""
        flat, shape, is_real = as_points(z)
        mu, c = self.mu, self.shift
        if k == 1:
            # K_{mu,c} minus its 1/w block
            vals = kernel_K(flat, mu, c, tol) - sinc(flat) * (float(eval_b(mu)) - 0.5 * c)
        elif k == 2:
            vals = kernel_M(flat, mu, c, tol, minorant=True) - sinc(flat) * sin_over_pi(flat) * (
                float(eval_B(-mu)) - c
            )
        else:
            raise DomainError("k must be 1 or 2")
        return restore(vals, shape, is_real)

    def describe(self) -> dict:
        return {"target": "exponential", "lambda": self.lambda_, "a": self.a}


def _validate_contour(k: int, beta: float, z: complex):
    if k not in (1, 2):
        raise DomainError("k must be 1 or 2")
    if not math.isfinite(beta) or float(beta).is_integer():
        raise DomainError("beta must be a non-integer real number")
    if z.real == beta:
        raise DomainError("z lies on the integration line Re(w) = beta")


def eval_I_k(k: int, beta: float, phi, z, tol: float = 1e-12) -> QuadResult:
    """I_k(beta, Phi; z) = (2 pi i)^-1 int (sin pi z / sin pi w)^k Phi(w)/(z-w) dw."""
    z = complex(z)
    _validate_contour(k, beta, z)
    pref = np.sin(math.pi * z) ** k

    def g(w):
        return phi(w) / (np.sin(math.pi * w) ** k * (z - w))

    breaks = (z.imag,) if abs(z.real - beta) < 1.0 else ()
    # scale the quadrature tolerance so the final product meets tol
    scale = max(abs(pref), 1e-300)
    res = integrate_vertical_line(g, beta, k * math.pi, tol=tol / scale, breakpoints=breaks)
    return QuadResult(complex(pref * res.value), scale * res.abs_err, res.evals)


def lemma_constant(k: int, beta: float, phi, tol: float = 1e-12) -> float:
    """B(beta, Phi) = 2^{k-1}/pi * int |Phi(beta+iv)/(beta+iv)| e^{-k pi |v|} dv."""
    if k not in (1, 2):
        raise DomainError("k must be 1 or 2")
    rate = k * math.pi

    def half(v):
        w = beta + 1j * v
        return np.abs(phi(w) / w) * np.exp(-rate * v)

    def half_neg(v):
        w = beta - 1j * v
        return np.abs(phi(w) / w) * np.exp(-rate * v)

    up = integrate_semi_infinite(half, decay=rate, tol=tol)
    down = integrate_semi_infinite(half_neg, decay=rate, tol=tol)
    return 2.0 ** (k - 1) / math.pi * float(up.value + down.value)


def lemma_bound(k: int, beta: float, phi, z) -> float:
    """Upper bound for |I_k(beta, Phi; z)| from the envelope constant B(beta, Phi)."""
    z = complex(z)
    _validate_contour(k, beta, z)
    const = lemma_constant(k, beta, phi)
    csc = abs(1.0 / math.sin(math.pi * beta))
    return const * csc**k * (1.0 + abs(z) / abs(z.real - beta)) * math.exp(k * math.pi * abs(z.imag))
