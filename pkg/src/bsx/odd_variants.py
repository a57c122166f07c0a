"""Odd targets T(x) - T(-x) and their extremal functions.

The odd approximants are compositions of the truncated ones:

    K~(z) = K(z) - K(-z),   L~(z) = L(z) - M(-z),   M~(z) = M(z) - L(-z).

Sources are either base problems (``BaseParams``) or subordinated ones (a
``Measure`` with a ``delta``, or an existing ``SubordinatedHandle``).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .approximants import DEFAULT_TOL, ApproximantHandle, _fd_derivative
from .base_functions import BaseParams, Kind
from .errors import ConstraintViolation
from .interpolation import as_points, restore
from .subordination import Measure, SubordinatedHandle

_PARTNER = {Kind.TWO_SIDED: Kind.TWO_SIDED, Kind.MINORANT: Kind.MAJORANT, Kind.MAJORANT: Kind.MINORANT}


def _base_handles(kind: Kind, params: BaseParams, tol: float):
    # every odd variant of the base target needs c <= e^{-lambda/delta}
    bound = params.c_endpoint
    if params.c > bound * (1.0 + 4.0 * np.finfo(float).eps):
        raise ConstraintViolation(
            f"odd variants require c <= exp(-lambda/delta) = {bound!r}, got c={params.c!r}"
        )
    plus = ApproximantHandle(kind, params, tol)
    minus = plus if kind is Kind.TWO_SIDED else ApproximantHandle(_PARTNER[kind], params, tol)
    return plus, minus


def _measure_handles(kind: Kind, measure: Measure, delta: float, tol: float):
    if kind is not Kind.TWO_SIDED and not measure.maj_growth:
        raise ConstraintViolation(
            f"odd one-sided approximation of {measure.label} needs int lambda/(1+lambda) dnu < inf"
        )
    plus = SubordinatedHandle(measure, delta, kind, tol)
    minus = plus if kind is Kind.TWO_SIDED else SubordinatedHandle(measure, delta, _PARTNER[kind], tol)
    return plus, minus


@dataclass(frozen=True, eq=False)
class OddHandle:
    """Odd extremal function built from a truncated pair (plus, minus)."""

    kind: Kind
    plus: object
    minus: object

    @classmethod
    def from_source(cls, kind, source, delta: float | None = None, tol: float = DEFAULT_TOL) -> "OddHandle":
        kind = Kind.parse(kind)
        if isinstance(source, BaseParams):
            plus, minus = _base_handles(kind, source, tol)
        elif isinstance(source, SubordinatedHandle):
            plus, minus = _measure_handles(kind, source.measure, source.delta, source.tol)
        elif isinstance(source, Measure):
            plus, minus = _measure_handles(kind, source, 1.0 if delta is None else float(delta), tol)
        else:
            raise TypeError(f"unsupported source {type(source).__name__}")
        return cls(kind, plus, minus)

    @property
    def delta(self) -> float:
        return self.plus.delta

    @property
    def k(self) -> int:
        return self.kind.type_multiple

    def __call__(self, z):
        flat, shape, is_real = as_points(z)
        vals = np.asarray(self.plus(flat)) - np.asarray(self.minus(-flat))
        return restore(vals, shape, is_real)

    def target(self, x):
        x = np.asarray(x, dtype=float)
        # zero at the origin by oddness, even when the truncated target is infinite there
        safe = np.where(x == 0, 1.0, x)
        out = np.where(x == 0, 0.0, self.plus.target(safe) - self.plus.target(-safe))
        return out[()] if out.ndim == 0 else out

    def target_prime(self, x):
        x = np.asarray(x, dtype=float)
        out = self.plus.target_prime(x) + self.plus.target_prime(-x)
        return out[()] if np.ndim(out) == 0 else out

    def target_limits_at_zero(self) -> tuple[float, float]:
        _, jump = self.plus.target_limits_at_zero()
        return -jump, jump

    def derivative(self, x, h: float = 1e-5):
        return _fd_derivative(self, x, h)

    def describe(self) -> dict:
        info = dict(self.plus.describe())
        info["kind"] = str(info["kind"]) + "_odd"
        return info


def eval_T_odd(source, x, delta: float | None = None):
    """T(x) - T(-x) for a base problem or a subordinated one (0 at the origin)."""
    if isinstance(source, BaseParams):
        source.check(Kind.MAJORANT)
        plus = ApproximantHandle.unchecked(Kind.MAJORANT, source)
    elif isinstance(source, SubordinatedHandle):
        plus = source
    elif isinstance(source, Measure):
        # the target does not depend on the kind; pick one the measure admits
        kind = Kind.MAJORANT if source.maj_growth else Kind.TWO_SIDED
        plus = SubordinatedHandle(source, 1.0 if delta is None else float(delta), kind)
    else:
        raise TypeError(f"unsupported source {type(source).__name__}")
    return OddHandle(Kind.TWO_SIDED, plus, plus).target(x)


def eval_K_odd(source, z, delta: float | None = None, tol: float = DEFAULT_TOL):
    return OddHandle.from_source(Kind.TWO_SIDED, source, delta, tol)(z)


def eval_L_odd(source, z, delta: float | None = None, tol: float = DEFAULT_TOL):
    return OddHandle.from_source(Kind.MINORANT, source, delta, tol)(z)


def eval_M_odd(source, z, delta: float | None = None, tol: float = DEFAULT_TOL):
    return OddHandle.from_source(Kind.MAJORANT, source, delta, tol)(z)

