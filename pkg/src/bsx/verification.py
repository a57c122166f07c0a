"""Numerical certificates for the extremal inequalities and error identities.

Every check returns a :class:`Certificate`.  A certificate records the most
adverse signed slack found (``worst_margin``), where it occurred, the grid
and the tolerance, and passes exactly when ``worst_margin >= -tol_used``.

Handles are duck-typed: anything with ``__call__``, ``target``,
``target_prime``, ``target_limits_at_zero``, ``kind``, ``k``, ``delta``,
``tol`` and ``describe`` works (base, step, subordinated and odd handles).
"""
from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import zeta

from .approximants import StepHandle, closed_form_error
from .base_functions import BaseParams, Kind
from .approximants import ApproximantHandle
from .errors import DomainError, NonConvergence, Overflow
from .numerics.quadrature import QuadResult, integrate_finite

CERT_VERSION = "bsx-cert/1"
NODE_EXCLUSION = 1e-12
DERIVATIVE_TOL = 1e-7
FD_STEP = 1e-5
# points per chunk handed to an approximant in one call
_CHUNK = 20_000
# node intervals integrated explicitly on each side of the origin
_L1_INTERVALS = 256
_GL_HI = np.polynomial.legendre.leggauss(24)
_GL_LO = np.polynomial.legendre.leggauss(16)


class Claim(str, enum.Enum):
    SIGN_TWO_SIDED = "SignTwoSided"
    MINORANT = "Minorant"
    MAJORANT = "Majorant"
    NODE_INTERP = "NodeInterp"
    L1_MATCH = "L1Match"
    TYPE_BOUND = "TypeBound"
    IDENTITY = "Identity"


@dataclass(frozen=True)
class GridSpec:
    """Real evaluation grid ``min:max:count[:spacing]``.

    ``log`` spacing on a range containing 0 puts half the points on each side,
    geometrically spaced down to 1e-4 of the range; ``chebyshev`` clusters
    points towards the ends of every node interval [j/delta, (j+1)/delta].
    """

    min: float
    max: float
    count: int
    spacing: str = "uniform"

    def __post_init__(self):
        if not (math.isfinite(self.min) and math.isfinite(self.max) and self.min < self.max):
            raise ValueError(f"grid needs finite min < max, got {self.min!r}, {self.max!r}")
        if int(self.count) != self.count or self.count < 2:
            raise ValueError(f"grid count must be an integer >= 2, got {self.count!r}")
        if self.spacing not in ("uniform", "log", "chebyshev"):
            raise ValueError(f"unknown spacing {self.spacing!r}; expected uniform, log or chebyshev")
        object.__setattr__(self, "count", int(self.count))

    @classmethod
    def parse(cls, text: str) -> "GridSpec":
        parts = text.split(":")
        if len(parts) not in (3, 4):
            raise ValueError(f"grid must look like min:max:count[:spacing], got {text!r}")
        spacing = parts[3] if len(parts) == 4 else "uniform"
        try:
            lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError:
            raise ValueError(f"grid must look like min:max:count[:spacing], got {text!r}") from None
        return cls(lo, hi, count, spacing)

    def points(self, delta: float = 1.0) -> np.ndarray:
        if self.spacing == "uniform":
            return np.linspace(self.min, self.max, self.count)
        if self.spacing == "log":
            return self._log_points()
        return self._chebyshev_points(delta)

    def _log_points(self) -> np.ndarray:
        lo, hi, n = self.min, self.max, self.count
        if lo > 0:
            return np.geomspace(lo, hi, n)
        if hi < 0:
            return -np.geomspace(-lo, -hi, n)
        floor = 1e-4 * max(-lo, hi)
        n_neg = n // 2 if lo < 0 else 0
        n_pos = n - n_neg
        neg = -np.geomspace(-lo, floor, n_neg) if n_neg and -lo > floor else np.empty(0)
        pos = np.geomspace(floor, hi, n_pos) if hi > floor else np.empty(0)
        return np.concatenate([neg, pos])

    def _chebyshev_points(self, delta: float) -> np.ndarray:
        h = 1.0 / delta
        j_lo, j_hi = math.floor(self.min / h), math.ceil(self.max / h)
        starts = np.arange(j_lo, j_hi) * h
        per, extra = divmod(self.count, starts.size)
        pts = []
        for i, a in enumerate(starts):
            p = per + (1 if i < extra else 0)
            if p == 0:
                continue
            # first-kind Chebyshev nodes never land on the interval ends
            theta = (2.0 * np.arange(p) + 1.0) * math.pi / (2.0 * p)
            pts.append(a + 0.5 * h * (1.0 - np.cos(theta)))
        x = np.concatenate(pts)
        return x[(x >= self.min) & (x <= self.max)]

    def as_dict(self) -> dict:
        return {"min": self.min, "max": self.max, "count": self.count, "spacing": self.spacing}


@dataclass(frozen=True)
class Certificate:
    claim: Claim
    params_echo: dict
    worst_margin: float
    worst_location: float
    grid_spec: dict
    passed: bool
    tol_used: float
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "claim", Claim(self.claim))
        if self.passed != (self.worst_margin >= -self.tol_used):
            raise ValueError("passed must equal worst_margin >= -tol_used")

    @classmethod
    def build(cls, claim, params_echo, worst_margin, worst_location, grid_spec, tol_used, details=None):
        worst_margin = float(worst_margin)
        return cls(
            claim,
            params_echo,
            worst_margin,
            float(worst_location),
            grid_spec,
            bool(worst_margin >= -tol_used),
            float(tol_used),
            dict(details or {}),
        )

    def to_dict(self) -> dict:
        return {
            "version": CERT_VERSION,
            "claim": self.claim.value,
            "params_echo": self.params_echo,
            "worst_margin": self.worst_margin,
            "worst_location": self.worst_location,
            "grid_spec": self.grid_spec,
            "passed": self.passed,
            "tol_used": self.tol_used,
            "details": self.details,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_json(cls, text: str) -> "Certificate":
        data = json.loads(text)
        if data.pop("version", None) != CERT_VERSION:
            raise ValueError(f"not a {CERT_VERSION} certificate")
        return cls(**data)


def cert_tol(approx) -> float:
    return max(1e-9, 10.0 * float(getattr(approx, "tol", 0.0)))


def _evaluate(fn, x: np.ndarray) -> np.ndarray:
    out = np.empty(x.size)
    for start in range(0, x.size, _CHUNK):
        sl = slice(start, start + _CHUNK)
        out[sl] = np.real(np.asarray(fn(x[sl]), dtype=complex))
    return out


def _target_fn(approx, target):
    return approx.target if target is None else target


def _kind_of(approx) -> Kind:
    return Kind.parse(approx.kind)


def _as_grid(grid) -> GridSpec:
    if isinstance(grid, GridSpec):
        return grid
    if isinstance(grid, str):
        return GridSpec.parse(grid)
    return GridSpec(*grid)


def _worst(margins: np.ndarray, x: np.ndarray) -> tuple[float, float]:
    if margins.size == 0:
        return math.inf, math.nan
    i = int(np.argmin(margins))
    return float(margins[i]), float(x[i])


def verify_sign_two_sided(approx, target, grid, tol: float | None = None) -> Certificate:
    """min over the grid of sin(pi delta x) (target - approx); nodes are skipped."""
    spec = _as_grid(grid)
    delta = approx.delta
    x = spec.points(delta)
    w = delta * x
    x = x[np.abs(w - np.rint(w)) >= NODE_EXCLUSION]
    margins = np.sin(math.pi * delta * x) * (_evaluate(_target_fn(approx, target), x) - _evaluate(approx, x))
    worst, where = _worst(margins, x)
    tol_used = cert_tol(approx) if tol is None else tol
    return Certificate.build(
        Claim.SIGN_TWO_SIDED, approx.describe(), worst, where, spec.as_dict(), tol_used, {"points": int(x.size)}
    )


def verify_one_sided(approx, target, side, grid, tol: float | None = None) -> Certificate:
    """Signed slack (target - L) or (M - target) on the grid; x = 0 is checked
    against the one-sided limits of the target there."""
    spec = _as_grid(grid)
    side = _kind_of(approx) if side is None else Kind.parse(side)
    if side is Kind.TWO_SIDED:
        raise DomainError("verify_one_sided needs side 'minorant' or 'majorant'")
    x = spec.points(approx.delta)
    has_zero = bool(np.any(x == 0.0)) or spec.min <= 0.0 <= spec.max
    x = x[x != 0.0]
    diff = _evaluate(_target_fn(approx, target), x) - _evaluate(approx, x)
    margins = diff if side is Kind.MINORANT else -diff
    worst, where = _worst(margins, x)
    details = {"points": int(x.size)}
    if has_zero:
        left, right = approx.target_limits_at_zero()
        at_zero = float(np.real(approx(0.0)))
        m0 = min(left, right) - at_zero if side is Kind.MINORANT else at_zero - max(left, right)
        details["margin_at_zero"] = m0
        if m0 < worst:
            worst, where = m0, 0.0
    claim = Claim.MINORANT if side is Kind.MINORANT else Claim.MAJORANT
    tol_used = cert_tol(approx) if tol is None else tol
    return Certificate.build(claim, approx.describe(), worst, where, spec.as_dict(), tol_used, details)


def verify_nodes(approx, target=None, n_range=(-20, 20), with_derivatives: bool = False,
                 tol: float | None = None) -> Certificate:
    """Interpolation residuals at the nodes n/delta, n in n_range without 0.

    With derivatives, the derivative residual is rescaled by
    tol_used/DERIVATIVE_TOL so that a single margin carries both checks.
    """
    lo, hi = int(n_range[0]), int(n_range[1])
    if lo > hi:
        raise ValueError("n_range must satisfy lo <= hi")
    n = np.arange(lo, hi + 1)
    n = n[n != 0]
    if n.size == 0:
        raise ValueError("n_range contains no nonzero nodes")
    if with_derivatives and _kind_of(approx) is Kind.TWO_SIDED:
        raise DomainError("derivative interpolation holds for one-sided kinds only")
    x = n / approx.delta
    tol_used = cert_tol(approx) if tol is None else tol
    res = np.abs(_evaluate(approx, x) - _evaluate(_target_fn(approx, target), x))
    scaled = res.copy()
    details = {"max_value_residual": float(res.max())}
    if with_derivatives:
        der = approx.derivative(x, FD_STEP)
        dres = np.abs(np.real(der) - np.asarray(approx.target_prime(x), dtype=float))
        details["max_derivative_residual"] = float(dres.max())
        details["derivative_tol"] = DERIVATIVE_TOL
        scaled = np.maximum(scaled, dres * (tol_used / DERIVATIVE_TOL))
    worst, where = _worst(-scaled, x)
    grid = {"n_min": lo, "n_max": hi, "with_derivatives": with_derivatives, "fd_step": FD_STEP}
    return Certificate.build(Claim.NODE_INTERP, approx.describe(), worst, where, grid, tol_used, details)


# --------------------------------------------------------------------------
# L1 errors


def _interval_integrals(fn, starts: np.ndarray, h: float):
    """Gauss-Legendre integrals of fn over [s, s+h] with 24 and 16 nodes."""
    out = []
    for nodes, weights in (_GL_HI, _GL_LO):
        x = starts[:, None] + 0.5 * h * (nodes[None, :] + 1.0)
        vals = fn(x.ravel()).reshape(x.shape)
        out.append(0.5 * h * (vals @ weights))
    return out[0], np.abs(out[0] - out[1])


def _tail_sum(values: np.ndarray, t: np.ndarray) -> tuple[float, float]:
    """Extrapolate sum_{j >= J} I_j from the last interval integrals, assuming
    I_j ~ sum_i c_i t_j^{-(p+i)} with t_j = j + 1/2.

    The leading power p is read off the last half of the data (snapped to an
    integer when close).  The error estimate is the spread between fits with
    three and four basis functions.
    """
    if not np.any(values):
        return 0.0, 0.0
    half = values.size // 2
    a, b = values[half], values[-1]
    if a <= 0 or b <= 0:
        raise NonConvergence("interval contributions do not decay monotonically; cannot bound the tail")
    p = -math.log(b / a) / math.log(t[-1] / t[half])
    if p <= 1.0:
        raise NonConvergence(f"interval contributions decay like j^-{p:.3g}; the integral diverges")
    if abs(p - round(p)) < 0.1:
        p = float(round(p))
    fit_t, fit_v = t[values.size // 4:], values[values.size // 4:]
    t_next = t[-1] + 1.0
    estimates = []
    for terms in (3, 4):
        powers = p + np.arange(terms)
        scale = fit_t[-1] ** powers
        design = (fit_t[:, None] / fit_t[-1]) ** (-powers[None, :])
        coef, *_ = np.linalg.lstsq(design, fit_v, rcond=None)
        coef = coef * scale
        estimates.append(float(np.sum(coef * zeta(powers, t_next))))
    return estimates[-1], abs(estimates[-1] - estimates[0])


def numeric_l1_error(approx, target=None, tol: float = 1e-9, mode: str | None = None) -> QuadResult:
    """int |target - approx| (two-sided kinds) or the signed one-sided integral
    int (target - L) / int (M - target), node interval by node interval.

    Intervals away from the origin use Gauss-Legendre (the integrand is
    analytic there and keeps one sign); the two intervals touching the jump
    use tanh-sinh.  Beyond the last explicit interval the contributions are
    extrapolated with a fitted power law.
    """
    kind = _kind_of(approx)
    if mode is None:
        mode = "abs" if kind is Kind.TWO_SIDED else ("minorant" if kind is Kind.MINORANT else "majorant")
    if mode not in ("abs", "minorant", "majorant"):
        raise ValueError(f"unknown mode {mode!r}")
    tfn = _target_fn(approx, target)
    sign = -1.0 if mode == "majorant" else 1.0

    def integrand(x):
        d = sign * (np.asarray(tfn(x), dtype=float) - np.real(np.asarray(approx(x), dtype=complex)))
        return np.abs(d) if mode == "abs" else d

    h = 1.0 / approx.delta
    J = _L1_INTERVALS
    total, err, evals = 0.0, 0.0, 0
    for a in (-h, 0.0):
        res = integrate_finite(integrand, a, a + h, tol=tol / 10)
        total += float(res.value)
        err += res.abs_err
        evals += res.evals
    j = np.arange(1, J, dtype=float)
    t = j + 0.5
    for side in (1.0, -1.0):
        starts = j * h if side > 0 else -(j + 1.0) * h
        vals, gl_err = _interval_integrals(integrand, starts, h)
        evals += 40 * j.size
        tail, tail_err = _tail_sum(np.abs(vals) if mode == "abs" else vals, t)
        total += math.fsum(vals) + tail
        err += float(gl_err.sum()) + tail_err
    return QuadResult(total, err + 1e-15 * abs(total), evals)


def verify_l1(approx, expected: float, rel_tol: float = 1e-6, target=None) -> Certificate:
    """Compare numeric_l1_error with an expected value (closed form)."""
    res = numeric_l1_error(approx, target)
    rel = abs(float(res.value) - expected) / abs(expected)
    details = {"numeric": float(res.value), "expected": expected, "abs_err": res.abs_err, "relative": rel}
    return Certificate.build(Claim.L1_MATCH, approx.describe(), -rel, math.nan, {"intervals": _L1_INTERVALS},
                             rel_tol, details)


# --------------------------------------------------------------------------
# exponential type


def estimate_exponential_type(approx, k_expected: int | None = None, y_max: float = 20.0,
                              samples: int = 64) -> Certificate:
    """Fit the growth rate of log|F(iy)| over [y_max/2, y_max].

    Passes when the slope is at most k pi delta (1 + 5%).  ``details`` also
    records the envelope constant sup_y [log|F(iy)| - log(1+y) - k pi delta y]
    over [1, y_max].
    """
    k = approx.k if k_expected is None else int(k_expected)
    if k not in (1, 2):
        raise DomainError("k_expected must be 1 or 2")
    rate = k * math.pi * approx.delta
    if not y_max > 2.0:
        raise DomainError("y_max must exceed 2")
    if rate * y_max >= 700.0:
        raise Overflow(f"|F(iy)| ~ exp({rate * y_max:.0f}) leaves the binary64 range; lower y_max")
    y = np.linspace(0.5 * y_max, y_max, samples)
    logs = np.log(np.abs(np.asarray(approx(1j * y), dtype=complex)))
    slope = float(np.polyfit(y, logs, 1)[0])
    y_env = np.linspace(1.0, y_max, 4 * samples)
    env = np.log(np.abs(np.asarray(approx(1j * y_env), dtype=complex))) - np.log1p(y_env) - rate * y_env
    i = int(np.argmax(env))
    details = {
        "slope": slope,
        "expected": rate,
        "relative_deviation": slope / rate - 1.0,
        "envelope_constant": float(env[i]),
    }
    grid = {"y_min": 0.5 * y_max, "y_max": y_max, "samples": samples}
    return Certificate.build(Claim.TYPE_BOUND, {**approx.describe(), "k": k}, 1.05 * rate - slope, y_env[i],
                             grid, 0.0, details)


# --------------------------------------------------------------------------
# identities


def _identity(handle, expected: float, name: str, tol: float) -> Certificate:
    res = numeric_l1_error(handle)
    diff = abs(float(res.value) - expected)
    details = {"identity": name, "numeric": float(res.value), "expected": expected, "abs_err": res.abs_err}
    return Certificate.build(Claim.IDENTITY, handle.describe(), -diff, math.nan, {"intervals": _L1_INTERVALS},
                             tol, details)


def identity_step(tol: float = 1e-6) -> Certificate:
    """int |E_0 - K_0| = 1/2."""
    return _identity(StepHandle(Kind.TWO_SIDED), 0.5, "step", tol)


def identity_exponential(lambda_: float = 1.0, tol: float = 1e-6) -> Certificate:
    """int |E_lambda - K_lambda| = (1 - e^-lambda) / (lambda (1 + e^-lambda))."""
    handle = ApproximantHandle(Kind.TWO_SIDED, BaseParams(lambda_, 0.0))
    expected = -math.expm1(-lambda_) / (lambda_ * (1.0 + math.exp(-lambda_)))
    return _identity(handle, expected, "exponential", tol)


def identity_poisson(lambda_: float = 1.0, tol: float = 1e-6) -> Certificate:
    """int (M_lambda - E_lambda) = 1/(1 - e^-lambda) - 1/lambda."""
    handle = ApproximantHandle(Kind.MAJORANT, BaseParams(lambda_, 0.0))
    expected = -1.0 / math.expm1(-lambda_) - 1.0 / lambda_
    return _identity(handle, expected, "poisson", tol)


def budget_gap(params: BaseParams) -> tuple[float, float]:
    """(numeric, closed-form) values of int (M - T) + int (T - L)."""
    lo = numeric_l1_error(ApproximantHandle(Kind.MINORANT, params))
    hi = numeric_l1_error(ApproximantHandle(Kind.MAJORANT, params))
    closed = closed_form_error(Kind.MINORANT, params) + closed_form_error(Kind.MAJORANT, params)
    return float(lo.value) + float(hi.value), closed
