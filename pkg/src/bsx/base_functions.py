"""Closed-form base objects: b, B, B'', the truncated exponentials and their parameters."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConstraintViolation, DomainError

# Relative slack allowed when checking c against its bound, so that
# c = "auto" computed in a different order still passes.
_C_SLACK = 4.0 * np.finfo(float).eps

_B_SERIES_SEAM = 1e-2
# Taylor coefficients of B(w) = w / (1 - e^{-w}) about 0.
_B_SERIES = (1.0, 0.5, 1.0 / 12.0, 0.0, -1.0 / 720.0, 0.0, 1.0 / 30240.0, 0.0, -1.0 / 1209600.0)

_B2_SERIES_SEAM = 0.5
# Taylor coefficients of B''(w) in powers of w^2.
_B2_SERIES = (
    1.0 / 6.0,
    -1.0 / 60.0,
    1.0 / 1008.0,
    -1.0 / 21600.0,
    5.0 / (66.0 * 40320.0),
    -691.0 / (2730.0 * 3628800.0),
    7.0 / (6.0 * 479001600.0),
    -3617.0 / (510.0 * 87178291200.0),
)


class Kind(enum.Enum):
    """Which extremal problem an approximant solves."""

    TWO_SIDED = "K"
    MINORANT = "L"
    MAJORANT = "M"

    @classmethod
    def parse(cls, value) -> "Kind":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower()
        aliases = {
            "k": cls.TWO_SIDED,
            "two-sided": cls.TWO_SIDED,
            "twosided": cls.TWO_SIDED,
            "two_sided": cls.TWO_SIDED,
            "l": cls.MINORANT,
            "minorant": cls.MINORANT,
            "m": cls.MAJORANT,
            "majorant": cls.MAJORANT,
        }
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown kind {value!r}; expected K, L or M") from None

    @property
    def type_multiple(self) -> int:
        """k such that the approximant has exponential type k*pi*delta."""
        return 1 if self is Kind.TWO_SIDED else 2


@dataclass(frozen=True)
class BaseParams:
    """Problem instance (lambda, c, delta) for the shifted truncated exponential.

    ``c`` may be given as the string ``"auto"``, which resolves to the endpoint
    value ``exp(-lambda/delta)``.
    """

    lambda_: float
    c: float = field(default="auto")
    delta: float = 1.0

    def __post_init__(self):
        lam = float(self.lambda_)
        delta = float(self.delta)
        if not (math.isfinite(lam) and lam > 0.0):
            raise ConstraintViolation(f"lambda must be a positive finite number, got {self.lambda_!r}")
        if not (math.isfinite(delta) and delta > 0.0):
            raise ConstraintViolation(f"delta must be a positive finite number, got {self.delta!r}")
        c = self.c
        if isinstance(c, str):
            if c.strip().lower() != "auto":
                raise ConstraintViolation(f"c must be a number or 'auto', got {c!r}")
            c = math.exp(-lam / delta)
        c = float(c)
        if not math.isfinite(c):
            raise ConstraintViolation("c must be finite")
        object.__setattr__(self, "lambda_", lam)
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "c", c)

    @property
    def mu(self) -> float:
        """Rate of the rescaled problem solved at type pi: lambda/delta."""
        return self.lambda_ / self.delta

    @property
    def a(self) -> float:
        return 1.0 / self.delta

    @property
    def c_endpoint(self) -> float:
        return math.exp(-self.mu)

    def check(self, kind) -> "BaseParams":
        """Raise ConstraintViolation unless the shift c is admissible for ``kind``."""
        kind = Kind.parse(kind)
        if kind is Kind.MAJORANT:
            if self.c > 1.0 + _C_SLACK:
                raise ConstraintViolation(
                    f"majorant requires c <= 1, got c={self.c!r}"
                )
        else:
            bound = self.c_endpoint
            if self.c > bound * (1.0 + _C_SLACK):
                name = "two-sided approximation" if kind is Kind.TWO_SIDED else "minorant"
                raise ConstraintViolation(
                    f"{name} requires c <= exp(-lambda/delta) = {bound!r}, got c={self.c!r}"
                )
        return self

    def as_dict(self) -> dict:
        return {"lambda": self.lambda_, "c": self.c, "delta": self.delta}


def eval_b(w):
    """b(w) = 1/(1+e^w), overflow-safe."""
    w = np.asarray(w, dtype=float)
    # 1/(1+e^w) = e^{-w}/(1+e^{-w}) for w > 0
    e = np.exp(-np.abs(w))
    out = np.where(w > 0, e / (1.0 + e), 1.0 / (1.0 + e))
    return out[()] if out.ndim == 0 else out


def eval_b_minus_half(w):
    """b(w) - 1/2 = -tanh(w/2)/2, free of cancellation near 0."""
    out = -0.5 * np.tanh(0.5 * np.asarray(w, dtype=float))
    return out[()] if out.ndim == 0 else out


def eval_B(w):
    """B(w) = w/(1-e^{-w}) with B(0) = 1."""
    w = np.asarray(w, dtype=float)
    small = np.abs(w) < _B_SERIES_SEAM
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        pos = w / -np.expm1(-w)
        # rewrite for w < 0 so that e^{-w} never overflows
        neg = w * np.exp(w) / np.expm1(w)
    series = np.polynomial.polynomial.polyval(np.where(small, w, 0.0), _B_SERIES)
    out = np.where(small, series, np.where(w > 0, pos, neg))
    return out[()] if out.ndim == 0 else out


def eval_B_minus_one(w):
    """B(w) - 1 with full relative accuracy near 0."""
    w = np.asarray(w, dtype=float)
    small = np.abs(w) < _B_SERIES_SEAM
    series = np.polynomial.polynomial.polyval(np.where(small, w, 0.0), (0.0,) + _B_SERIES[1:])
    out = np.where(small, series, eval_B(w) - 1.0)
    return out[()] if out.ndim == 0 else out


def eval_B_second(w):
    """B''(w) = w e^w/(e^w-1)^2 (coth(w/2) - 2/w) with B''(0) = 1/6."""
    w = np.asarray(w, dtype=float)
    small = np.abs(w) < _B2_SERIES_SEAM
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        half = 0.5 * np.abs(w)
        # w e^w/(e^w-1)^2 = w / (4 sinh^2(w/2)); the bracket is odd, so use |w|
        big = half / (2.0 * np.sinh(half) ** 2) * (1.0 / np.tanh(half) - 1.0 / half)
        big = np.where(np.isfinite(big), big, 0.0)
    series = np.polynomial.polynomial.polyval(np.where(small, w * w, 0.0), _B2_SERIES)
    out = np.where(small, series, big)
    return out[()] if out.ndim == 0 else out


def eval_E0(x):
    """Heaviside step with value 1/2 at the origin."""
    x = np.asarray(x, dtype=float)
    out = np.where(x > 0, 1.0, np.where(x < 0, 0.0, 0.5))
    return out[()] if out.ndim == 0 else out


def eval_T(params: BaseParams, x):
    """T_{lambda,c}(x): e^{-lambda x} - c for x>0, (1-c)/2 at 0, 0 for x<0."""
    x = np.asarray(x, dtype=float)
    with np.errstate(over="ignore"):
        pos = np.exp(-params.lambda_ * np.where(x > 0, x, 0.0)) - params.c
    out = np.where(x > 0, pos, np.where(x < 0, 0.0, 0.5 * (1.0 - params.c)))
    return out[()] if out.ndim == 0 else out


def eval_T_prime(params: BaseParams, x):
    """T'_{lambda,c}(x) = -lambda e^{-lambda x}, defined for x > 0."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise DomainError("the derivative of T is only defined for x > 0")
    out = -params.lambda_ * np.exp(-params.lambda_ * x)
    return out[()] if out.ndim == 0 else out


def eval_T_complex(lambda_: float, a: float, z):
    """Half-plane target e^{-a lambda z} - e^{-lambda} for Re z > 0, 0 for Re z < 0.

    On the imaginary axis the midpoint value (1 - e^{-lambda})/2 is returned.
    """
    if not (lambda_ > 0 and a > 0):
        raise DomainError("lambda and a must be positive")
    z = np.asarray(z, dtype=complex)
    shift = math.exp(-lambda_)
    with np.errstate(over="ignore", invalid="ignore"):
        right = np.exp(-a * lambda_ * np.where(z.real > 0, z, 0.0)) - shift
    out = np.where(z.real > 0, right, np.where(z.real < 0, 0.0, 0.5 * (1.0 - shift)))
    return out[()] if out.ndim == 0 else out
