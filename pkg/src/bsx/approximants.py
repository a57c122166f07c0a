"""Base-case extremal functions K, L, M for the shifted truncated exponential.

``eval_K(params, z)`` returns K_{lambda/delta, c}(delta z), the best
approximation of type pi*delta; L and M are the minorant and majorant of type
2*pi*delta.  The step-function counterparts K_0, L_0, M_0 (rate zero) are
exposed separately because rate zero is not a valid ``BaseParams``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .base_functions import BaseParams, Kind, eval_E0, eval_T, eval_T_prime
from .errors import ConstraintViolation
from .interpolation import as_points, kernel_K, kernel_M, restore

DEFAULT_TOL = 1e-11


def _rescaled(z, delta):
    flat, shape, is_real = as_points(z)
    return flat * delta, shape, is_real


def eval_K(params: BaseParams, z, tol: float = DEFAULT_TOL, check: bool = True):
    """Best approximation of type pi*delta, evaluated at ``z`` (scalar or array)."""
    if check:
        params.check(Kind.TWO_SIDED)
    w, shape, is_real = _rescaled(z, params.delta)
    return restore(kernel_K(w, params.mu, params.c, tol), shape, is_real)


def eval_L(params: BaseParams, z, tol: float = DEFAULT_TOL, check: bool = True):
    """Optimal minorant of type 2*pi*delta."""
    if check:
        params.check(Kind.MINORANT)
    w, shape, is_real = _rescaled(z, params.delta)
    return restore(kernel_M(w, params.mu, params.c, tol, minorant=True), shape, is_real)


def eval_M(params: BaseParams, z, tol: float = DEFAULT_TOL, check: bool = True):
    """Optimal majorant of type 2*pi*delta."""
    if check:
        params.check(Kind.MAJORANT)
    w, shape, is_real = _rescaled(z, params.delta)
    return restore(kernel_M(w, params.mu, params.c, tol, minorant=False), shape, is_real)


def eval_K0(z, delta: float = 1.0, tol: float = DEFAULT_TOL):
    """Best approximation of the step function E_0 (value 1/2 at 0)."""
    w, shape, is_real = _rescaled(z, delta)
    return restore(kernel_K(w, None, -1.0, tol), shape, is_real)


def eval_L0(z, delta: float = 1.0, tol: float = DEFAULT_TOL):
    w, shape, is_real = _rescaled(z, delta)
    return restore(kernel_M(w, None, -1.0, tol, minorant=True), shape, is_real)


def eval_M0(z, delta: float = 1.0, tol: float = DEFAULT_TOL):
    w, shape, is_real = _rescaled(z, delta)
    return restore(kernel_M(w, None, -1.0, tol, minorant=False), shape, is_real)


def _p(mu: float) -> float:
    """1/mu - 1/(e^mu - 1), accurate for small mu."""
    if mu < 1e-3:
        return 0.5 - mu / 12.0 + mu**3 / 720.0 - mu**5 / 30240.0
    return 1.0 / mu - 1.0 / math.expm1(mu)


def closed_form_error(kind, params: BaseParams) -> float:
    """Minimal L1 distance for the given problem, from the closed-form bracket."""
    kind = Kind.parse(kind)
    params.check(kind)
    mu = params.mu
    if kind is Kind.TWO_SIDED:
        # (1 - e^{-mu}) / (mu (1 + e^{-mu})) = tanh(mu/2)/mu
        bracket = math.tanh(0.5 * mu) / mu
    elif kind is Kind.MINORANT:
        bracket = _p(mu)
    else:
        bracket = 1.0 - _p(mu)
    return (bracket - 0.5 * params.c) / params.delta


def _fd_derivative(f, x, h: float = 1e-5):
    """Five-point central difference."""
    x = np.asarray(x, dtype=float)
    return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h)


@dataclass(frozen=True)
class ApproximantHandle:
    """Evaluator for one base-case extremal function together with its target."""

    kind: Kind
    params: BaseParams
    tol: float = DEFAULT_TOL
    checked: bool = True

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind.parse(self.kind))
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.checked:
            self.params.check(self.kind)

    @classmethod
    def unchecked(cls, kind, params: BaseParams, tol: float = DEFAULT_TOL) -> "ApproximantHandle":
        """Build a handle that skips the shift constraint (for regression tests)."""
        return cls(kind, params, tol, checked=False)

    @property
    def delta(self) -> float:
        return self.params.delta

    @property
    def k(self) -> int:
        return self.kind.type_multiple

    def __call__(self, z):
        fn = {Kind.TWO_SIDED: eval_K, Kind.MINORANT: eval_L, Kind.MAJORANT: eval_M}[self.kind]
        return fn(self.params, z, tol=self.tol, check=False)

    def target(self, x):
        return eval_T(self.params, x)

    def target_prime(self, x):
        x = np.asarray(x, dtype=float)
        safe = np.where(x > 0, x, 1.0)
        out = np.where(x > 0, eval_T_prime(self.params, safe), 0.0)
        return out[()] if out.ndim == 0 else out

    def target_limits_at_zero(self) -> tuple[float, float]:
        """(left limit, right limit) of the target at its jump."""
        return 0.0, 1.0 - self.params.c

    def derivative(self, x, h: float = 1e-5):
        return _fd_derivative(self, x, h)

    def describe(self) -> dict:
        return {"kind": self.kind.value, **self.params.as_dict(), "tol": self.tol}


@dataclass(frozen=True)
class StepHandle:
    """Extremal functions for the step E_0 (rate zero, shift zero)."""

    kind: Kind
    delta: float = 1.0
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind.parse(self.kind))
        if not self.delta > 0:
            raise ConstraintViolation("delta must be positive")

    @property
    def k(self) -> int:
        return self.kind.type_multiple

    def __call__(self, z):
        fn = {Kind.TWO_SIDED: eval_K0, Kind.MINORANT: eval_L0, Kind.MAJORANT: eval_M0}[self.kind]
        return fn(z, self.delta, self.tol)

    def target(self, x):
        return eval_E0(x)

    def target_prime(self, x):
        return np.zeros_like(np.asarray(x, dtype=float))

    def target_limits_at_zero(self) -> tuple[float, float]:
        return 0.0, 1.0

    def derivative(self, x, h: float = 1e-5):
        return _fd_derivative(self, x, h)

    def describe(self) -> dict:
        return {"kind": self.kind.value, "target": "step", "delta": self.delta, "tol": self.tol}
