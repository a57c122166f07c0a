"""Measure-subordinated targets and their extremal functions.

For a nonnegative measure nu on (0, inf) the target is

    Tnu(a; x) = int T_{a lambda, e^{-lambda}}(x) dnu(lambda).

For x > 0 every measure here splits it as ``V(x) - C`` where ``V`` carries the
x-dependence (for the power densities both pieces are analytic
continuations, only their difference is a convergent integral).  The
extremal functions are interpolation series over the integer nodes of that
split, plus constants given by nu-integrals of closed-form brackets.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np
from scipy.special import gamma as gamma_fn

from .base_functions import Kind, eval_B, eval_B_minus_one, eval_b
from .errors import ConstraintViolation, DomainError, NonConvergence
from .interpolation import (
    alternating_node_sum,
    as_points,
    restore,
    sin_over_pi,
    sinc,
    split_nodes,
    square_node_sum,
)
from .numerics.quadrature import integrate_semi_infinite
from .numerics.series import _cvz_weights, euler_maclaurin_tail, sum_alternating

DEFAULT_TOL = 1e-11
# CVZ orders compared to certify the alternating tail
_CVZ_ORDERS = (28, 40)
# Euler-Maclaurin correction pairs used for the L-series tail
_EM_ORDER = 8
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(24)


def _tanh_bracket(mu):
    """tanh(mu/2)/mu - 1/2, accurate for small mu."""
    mu = np.asarray(mu, dtype=float)
    small = mu < 1e-2
    safe = np.where(small, 1.0, mu)
    big = np.tanh(0.5 * safe) / safe - 0.5
    m = np.where(small, mu, 0.0)
    series = m * m * (-1.0 / 24.0 + m * m * (1.0 / 240.0 - m * m * 17.0 / 40320.0))
    return np.where(small, series, big)


def _p_bracket(mu):
    """1/mu - 1/(e^mu - 1) - 1/2, accurate for small mu."""
    mu = np.asarray(mu, dtype=float)
    small = mu < 1e-2
    safe = np.where(small, 1.0, mu)
    with np.errstate(over="ignore"):
        big = 1.0 / safe - 1.0 / np.expm1(safe) - 0.5
    m = np.where(small, mu, 0.0)
    series = m * (-1.0 / 12.0 + m * m * (1.0 / 720.0 - m * m / 30240.0))
    return np.where(small, series, big)


def _half_one_minus_exp(lam):
    return -0.5 * np.expm1(-np.asarray(lam, dtype=float))


def _blend(lam, near_zero, far):
    """near_zero(l) for l <= 1, far(l) beyond.

    Each bracket is a difference of two O(1) terms.  Near 0 the bracket is
    O(l) and the grouped form is exact; far out it decays and only the direct
    form avoids integrating cancellation noise against a slowly decaying
    density.
    """
    lam = np.asarray(lam, dtype=float)
    small = lam <= 1.0
    with np.errstate(over="ignore"):
        return np.where(small, near_zero(np.where(small, lam, 1.0)), far(np.where(small, 2.0, lam)))


def _falling(x: float, j: int) -> float:
    out = 1.0
    for i in range(j):
        out *= x - i
    return out


class Measure:
    """Interface shared by the measure descriptors."""

    label = "measure"

    def integrate(self, f, tol: float = 1e-12) -> float:
        raise NotImplementedError

    def V(self, x, a: float, j: int = 0):
        """j-th x-derivative of the x-dependent part of Tnu(a; x), x > 0."""
        raise NotImplementedError

    @property
    def C(self) -> float:
        raise NotImplementedError

    def growth_integral(self, which: str) -> float:
        if which == "min":
            return self.integrate(lambda lam: lam / (1.0 + lam * lam))
        if which == "maj":
            return self.integrate(lambda lam: lam / (1.0 + lam))
        raise ValueError("which must be 'min' or 'maj'")

    @cached_property
    def min_growth(self) -> bool:
        return math.isfinite(self.growth_integral("min"))

    @cached_property
    def maj_growth(self) -> bool:
        return math.isfinite(self.growth_integral("maj"))

    def jump_height(self) -> float:
        """Tnu(0+) = int (1 - e^{-lambda}) dnu; +inf when that diverges."""
        if not self.maj_growth:
            return math.inf
        return self.integrate(lambda lam: -np.expm1(-lam))

    def describe(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True, eq=False)
class PowerDensity(Measure):
    """dnu = lambda^{-alpha} dlambda with 0 < alpha < 2."""

    alpha: float

    def __post_init__(self):
        if not 0.0 < self.alpha < 2.0:
            raise DomainError("power density needs 0 < alpha < 2")

    @property
    def label(self) -> str:
        return f"power:alpha={self.alpha!r}"

    @property
    def is_log(self) -> bool:
        return self.alpha == 1.0

    def integrate(self, f, tol: float = 1e-12) -> float:
        """int f(l) l^{-alpha} dl for brackets f that vanish linearly at 0."""
        alpha = self.alpha
        sing = max(0.0, alpha - 1.0)

        def integrand(lam):
            # f(l)/l stays bounded, so the power never overflows near 0
            return (f(lam) / lam) * lam ** (1.0 - alpha)

        res = integrate_semi_infinite(integrand, decay=0.0, singular_exponent=sing, tol=tol)
        return float(np.real(res.value))

    def growth_integral(self, which: str) -> float:
        # int l^{s-1}/(1+l^2) dl = (pi/2)/sin(pi s/2), int l^{s-1}/(1+l) dl = pi/sin(pi s)
        s = 2.0 - self.alpha
        if which == "min":
            return 0.5 * math.pi / math.sin(0.5 * math.pi * s)
        if which == "maj":
            return math.pi / math.sin(math.pi * s) if s < 1.0 else math.inf
        raise ValueError("which must be 'min' or 'maj'")

    def V(self, x, a: float, j: int = 0):
        x = np.asarray(x, dtype=float)
        if self.is_log:
            if j == 0:
                return -np.log(a * x)
            return (-1.0) ** j * math.factorial(j - 1) / x**j
        g = float(gamma_fn(1.0 - self.alpha))
        p = self.alpha - 1.0
        return g * a**p * _falling(p, j) * x ** (p - j)

    @property
    def C(self) -> float:
        return 0.0 if self.is_log else float(gamma_fn(1.0 - self.alpha))

    def jump_height(self) -> float:
        if self.alpha <= 1.0:
            return math.inf
        return -float(gamma_fn(1.0 - self.alpha))

    def describe(self) -> dict:
        return {"measure": "power", "alpha": self.alpha}


@dataclass(frozen=True, eq=False)
class Atoms(Measure):
    """Finite combination of point masses sum w_i delta_{lambda_i}."""

    positions: tuple
    weights: tuple

    def __post_init__(self):
        pos = tuple(float(p) for p in self.positions)
        wts = tuple(float(w) for w in self.weights)
        if len(pos) != len(wts) or not pos:
            raise DomainError("atoms need matching, non-empty position and weight lists")
        if any(not (p > 0 and math.isfinite(p)) for p in pos):
            raise DomainError("atom positions must be positive")
        if any(not (w >= 0 and math.isfinite(w)) for w in wts):
            raise DomainError("atom weights must be non-negative")
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "weights", wts)

    @property
    def label(self) -> str:
        return "atoms:" + ",".join(f"{p!r}:{w!r}" for p, w in zip(self.positions, self.weights))

    def integrate(self, f, tol: float = 1e-12) -> float:
        lam = np.array(self.positions)
        return float(np.dot(np.array(self.weights), f(lam)))

    def V(self, x, a: float, j: int = 0):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for lam, w in zip(self.positions, self.weights):
            out = out + w * (-a * lam) ** j * np.exp(-a * lam * x)
        return out

    @property
    def C(self) -> float:
        return float(sum(w * math.exp(-p) for p, w in zip(self.positions, self.weights)))

    def describe(self) -> dict:
        return {"measure": "atoms", "positions": list(self.positions), "weights": list(self.weights)}


@dataclass(frozen=True, eq=False)
class TabulatedDensity(Measure):
    """Piecewise-linear density on [lambda_min, lambda_max], zero elsewhere."""

    lambdas: tuple
    density: tuple
    source: str = field(default="")

    def __post_init__(self):
        lam = np.asarray(self.lambdas, dtype=float)
        rho = np.asarray(self.density, dtype=float)
        if lam.ndim != 1 or lam.shape != rho.shape or lam.size < 2:
            raise DomainError("a tabulated density needs at least two (lambda, density) rows")
        if not np.all(np.isfinite(lam)) or not np.all(np.isfinite(rho)):
            raise DomainError("tabulated values must be finite")
        if lam[0] <= 0:
            raise DomainError("tabulated lambda values must be positive")
        if np.any(np.diff(lam) <= 0):
            raise DomainError("tabulated lambda values must be strictly increasing")
        if np.any(rho < 0):
            raise DomainError("tabulated density must be non-negative")
        object.__setattr__(self, "lambdas", tuple(lam))
        object.__setattr__(self, "density", tuple(rho))

    @property
    def label(self) -> str:
        return f"table:{self.source}" if self.source else "table"

    def _nodes(self, sharpness: float = 0.0):
        """Gauss-Legendre nodes and weights (density included) over all panels.

        ``sharpness`` is the largest exponential rate the integrand will carry;
        panels are subdivided so each piece spans at most a few e-folds.
        """
        lam = np.asarray(self.lambdas)
        rho = np.asarray(self.density)
        xs, ws = [], []
        for i in range(lam.size - 1):
            lo, hi = lam[i], lam[i + 1]
            pieces = int(min(64, max(1, math.ceil(sharpness * (hi - lo) / 4.0))))
            edges = np.linspace(lo, hi, pieces + 1)
            for e0, e1 in zip(edges[:-1], edges[1:]):
                half = 0.5 * (e1 - e0)
                x = e0 + half * (1.0 + _GL_NODES)
                dens = rho[i] + (rho[i + 1] - rho[i]) * (x - lo) / (hi - lo)
                xs.append(x)
                ws.append(half * _GL_WEIGHTS * dens)
        return np.concatenate(xs), np.concatenate(ws)

    def integrate(self, f, tol: float = 1e-12) -> float:
        x, w = self._nodes()
        return float(np.dot(w, f(x)))

    def V(self, x, a: float, j: int = 0):
        x = np.asarray(x, dtype=float)
        flat = x.ravel()
        lam, w = self._nodes(sharpness=a * float(np.max(flat, initial=0.0)))
        out = np.empty_like(flat)
        block = max(1, 2_000_000 // lam.size)
        for s in range(0, flat.size, block):
            xs = flat[s : s + block]
            out[s : s + block] = np.exp(-a * np.outer(xs, lam)) @ (w * (-a * lam) ** j)
        return out.reshape(x.shape)

    @property
    def C(self) -> float:
        return self.integrate(lambda lam: np.exp(-lam))

    def describe(self) -> dict:
        return {"measure": "table", "source": self.source, "rows": len(self.lambdas)}


def load_table(path) -> TabulatedDensity:
    """Read a CSV with header ``lambda,density``."""
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip().lower() for h in next(reader)]
        except StopIteration:
            raise DomainError(f"{path}: empty table") from None
        if header[:2] != ["lambda", "density"]:
            raise DomainError(f"{path}: header must be 'lambda,density'")
        rows = [r for r in reader if r and any(cell.strip() for cell in r)]
    try:
        lam = [float(r[0]) for r in rows]
        rho = [float(r[1]) for r in rows]
    except (ValueError, IndexError):
        raise DomainError(f"{path}: every row needs two numeric columns") from None
    return TabulatedDensity(tuple(lam), tuple(rho), source=str(path))


def parse_measure(text: str) -> Measure:
    """Parse ``power:alpha=A``, ``atoms:l1:w1[,l2:w2...]`` or ``table:path.csv``."""
    head, _, rest = text.strip().partition(":")
    head = head.lower()
    if head == "power":
        key, _, value = rest.partition("=")
        if key.strip().lower() != "alpha" or not value:
            raise DomainError("power measure syntax is power:alpha=<float>")
        return PowerDensity(float(value))
    if head == "atoms":
        pos, wts = [], []
        for item in rest.split(","):
            parts = item.split(":")
            if len(parts) != 2:
                raise DomainError("atoms syntax is atoms:<lambda>:<weight>[,<lambda>:<weight>...]")
            pos.append(float(parts[0]))
            wts.append(float(parts[1]))
        return Atoms(tuple(pos), tuple(wts))
    if head == "table":
        if not rest:
            raise DomainError("table syntax is table:<path.csv>")
        return load_table(rest)
    raise DomainError(f"unknown measure {text!r}")


def check_growth(measure: Measure, which: str) -> tuple[bool, float]:
    """Whether int lambda/(1+lambda^2) dnu ('min') or int lambda/(1+lambda) dnu ('maj')
    is finite, together with its value (inf when divergent)."""
    value = measure.growth_integral(which)
    return math.isfinite(value), value


def _require(measure: Measure, which: str):
    ok, _ = check_growth(measure, which)
    if not ok:
        cond = "int lambda/(1+lambda^2) dnu" if which == "min" else "int lambda/(1+lambda) dnu"
        raise ConstraintViolation(f"measure {measure.label} violates the growth condition {cond} < inf")


def eval_Tnu(measure: Measure, a: float, x):
    """Tnu(a; x); raises DomainError at x = 0 when the jump there is infinite."""
    _require(measure, "min")
    x = np.asarray(x, dtype=float)
    if np.any(x == 0):
        height = measure.jump_height()
        if not math.isfinite(height):
            raise DomainError("the target is +inf at x = 0 for this measure")
    else:
        height = 0.0
    pos = x > 0
    out = np.zeros_like(x)
    if np.any(pos):
        out[pos] = measure.V(x[pos], a) - measure.C
    out = np.where(x == 0, 0.5 * height, out)
    return out[()] if out.ndim == 0 else out


def eval_Tnu_prime(measure: Measure, a: float, x):
    """x-derivative of Tnu(a; x) for x > 0."""
    _require(measure, "min")
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise DomainError("the derivative of the target is only defined for x > 0")
    out = measure.V(x, a, 1)
    return out[()] if out.ndim == 0 else out


def coeff_K(measure: Measure, a: float, tol: float = 1e-12) -> float:
    """int (b(a lambda) - e^{-lambda}/2) dnu, integrated bracket-first."""
    _require(measure, "min")
    return measure.integrate(
        lambda lam: _blend(
            lam,
            lambda l: -0.5 * np.tanh(0.5 * a * l) + _half_one_minus_exp(l),
            lambda l: eval_b(a * l) - 0.5 * np.exp(-l),
        ),
        tol,
    )


def coeff_L(measure: Measure, a: float, tol: float = 1e-12) -> float:
    """int (a lambda/(e^{a lambda}-1) - e^{-lambda}) dnu, integrated bracket-first."""
    _require(measure, "min")
    return measure.integrate(
        lambda lam: _blend(
            lam,
            lambda l: eval_B_minus_one(-a * l) - np.expm1(-l),
            lambda l: eval_B(-a * l) - np.exp(-l),
        ),
        tol,
    )


def coeff_M_extra(measure: Measure, tol: float = 1e-12) -> float:
    """int (1 - e^{-lambda}) dnu."""
    _require(measure, "maj")
    return measure.integrate(lambda lam: -np.expm1(-lam), tol)


def closed_form_error_nu(kind, measure: Measure, delta: float, tol: float = 1e-12) -> float:
    """Minimal L1 error for the subordinated problem of type pi*delta (K) or 2*pi*delta."""
    kind = Kind.parse(kind)
    _check_kind(kind, measure, delta)
    a = 1.0 / delta
    if kind is Kind.TWO_SIDED:
        bracket = lambda lam: _blend(
            lam,
            lambda l: _tanh_bracket(a * l) + _half_one_minus_exp(l),
            lambda l: np.tanh(0.5 * a * l) / (a * l) - 0.5 * np.exp(-l),
        )
    elif kind is Kind.MINORANT:
        bracket = lambda lam: _blend(
            lam,
            lambda l: _p_bracket(a * l) + _half_one_minus_exp(l),
            lambda l: 1.0 / (a * l) - 1.0 / np.expm1(a * l) - 0.5 * np.exp(-l),
        )
    else:
        bracket = lambda lam: -_p_bracket(a * lam) + _half_one_minus_exp(lam)
    return measure.integrate(bracket, tol) / delta


def _check_kind(kind: Kind, measure: Measure, delta: float):
    if not (delta > 0 and math.isfinite(delta)):
        raise ConstraintViolation("delta must be positive")
    if kind is Kind.MAJORANT:
        _require(measure, "maj")
    else:
        _require(measure, "min")
        if delta < 1.0:
            raise ConstraintViolation(
                f"{'two-sided approximation' if kind is Kind.TWO_SIDED else 'minorant'} "
                f"of a subordinated target requires delta >= 1, got {delta!r}"
            )


# --------------------------------------------------------------------------
# series engine


def _direct_block(w, m, n, coeffs, power: int):
    """sum over the given nodes n (excluding m) of coeffs[n] / (w - n)^power."""
    out = np.zeros(w.shape, dtype=complex)
    block = max(1, 2_000_000 // max(1, n.size))
    for s in range(0, w.size, block):
        sl = slice(s, s + block)
        diff = w[sl, None] - n[None, :]
        hit = m[sl, None] == n[None, :]
        inv = np.where(hit, 0.0, 1.0 / np.where(hit, 1.0, diff))
        out[sl] = (inv**power) @ coeffs
    return out


def _alternating_tail(measure: Measure, a: float, w, n0: int, tol: float, weight):
    """sum_{n >= n0} (-1)^n V(n)/(w - n), accelerated per point with CVZ.

    ``weight`` is |sin(pi w)/pi| per point: the tolerance applies after the
    prefactor is multiplied in.
    """
    lo, hi = _CVZ_ORDERS
    k = np.arange(hi)
    vk = measure.V((n0 + k).astype(float), a)
    wt_hi = _cvz_weights(hi)
    wt_lo = _cvz_weights(lo)
    out = np.empty(w.shape, dtype=complex)
    bad = np.zeros(w.shape, dtype=bool)
    block = max(1, 2_000_000 // hi)
    for s in range(0, w.size, block):
        sl = slice(s, s + block)
        amat = vk[None, :] / (w[sl, None] - (n0 + k)[None, :])
        v_hi = amat @ wt_hi
        v_lo = amat[:, :lo] @ wt_lo
        out[sl] = v_hi
        bad[sl] = 10.0 * np.abs(v_hi - v_lo) * weight[sl] > tol
    sign0 = -1.0 if n0 % 2 else 1.0
    out *= sign0
    for i in np.flatnonzero(bad):
        wi = complex(w[i])
        term = lambda n, wi=wi: np.where(n % 2 == 0, 1.0, -1.0) * measure.V(n.astype(float), a) / (wi - n)
        res = sum_alternating(term, tol=tol / max(float(weight[i]), 1e-300), start=n0)
        out[i] = res.value
    return out


def _leibniz_G(measure: Measure, a: float, w, n_start: int, order: int):
    """Derivatives G^{(j)}(N), j = 0..order, of G(x) = V(x)/(x - w) at x = N."""
    vders = [float(measure.V(np.array([float(n_start)]), a, j)[0]) for j in range(order + 1)]
    d = n_start - w
    # u^{(i)} = (-1)^i i! / (x-w)^{i+1}
    u = [(-1.0) ** i * math.factorial(i) / d ** (i + 1) for i in range(order + 1)]
    out = []
    for j in range(order + 1):
        total = np.zeros(w.shape, dtype=complex)
        for i in range(j + 1):
            total = total + math.comb(j, i) * vders[j - i] * u[i]
        out.append(total)
    return out


def _series_K(measure: Measure, a: float, w, C: float, cK: float, tol: float):
    m, r, sign = split_nodes(w)
    s1 = sign * sin_over_pi(r)
    sr = sinc(r)
    wc = w.astype(complex)
    rc = r.astype(complex)
    at_zero = m == 0
    sinc_w = np.where(at_zero, sr, s1 / np.where(at_zero, 1.0, wc))

    part_c = -C * (s1 * alternating_node_sum(wc, m, rc, sign) + np.where(m >= 1, sr, 0.0))

    n0 = max(2, int(math.ceil(float(np.max(np.real(wc)) + np.max(np.abs(np.imag(wc)))))) + 3)
    n_head = np.arange(1, n0, dtype=float)
    v_head = measure.V(n_head, a)
    alt_head = np.where(n_head % 2 == 0, 1.0, -1.0) * v_head
    head = _direct_block(wc, m, n_head, alt_head, 1)
    tail = _alternating_tail(measure, a, wc, n0, tol / 4.0, np.minimum(np.abs(s1), 1.0))
    node_m = np.clip(m, 1.0, None)
    node = np.where(m >= 1, sr * measure.V(node_m, a), 0.0)
    return s1 * (head + tail) + node + part_c + sinc_w * cK


def _series_L(measure: Measure, a: float, w, C: float, cL: float, tol: float):
    m, r, _ = split_nodes(w)
    sr = sinc(r)
    s1r = sin_over_pi(r)
    s2 = s1r * s1r
    wc = w.astype(complex)
    rc = r.astype(complex)
    at_zero = m == 0
    inv_w = 1.0 / np.where(at_zero, 1.0, wc)

    part_c = -C * (s2 * square_node_sum(wc, m, rc) + np.where(m >= 1, sr * sr, 0.0))
    const = cL * np.where(at_zero, sr * s1r, s2 * inv_w)

    n_start = int(math.ceil(float(np.max(np.real(wc) + np.abs(np.imag(wc)))))) + 16
    n_start = max(n_start, 17)
    n_head = np.arange(1, n_start, dtype=float)
    v0 = measure.V(n_head, a)
    v1 = measure.V(n_head, a, 1)
    head = _direct_block(wc, m, n_head, v0, 2) + _direct_block(wc, m, n_head, v1, 1)

    g = _leibniz_G(measure, a, wc, n_start, 2 * _EM_ORDER)
    tail, last = euler_maclaurin_tail(g[0], [-g[j + 1] for j in range(2 * _EM_ORDER)])
    if np.any(np.abs(last) * np.minimum(np.abs(s2), 1.0) > tol):
        raise NonConvergence("Euler-Maclaurin tail of the minorant series did not settle")

    node_m = np.clip(m, 1.0, None)
    node = np.where(m >= 1, sr * sr * measure.V(node_m, a) + sr * s1r * measure.V(node_m, a, 1), 0.0)
    return s2 * (head + tail) + node + part_c + const


@dataclass(frozen=True, eq=False)
class SubordinatedHandle:
    """Extremal function of a subordinated target, evaluated at x via (1/delta; delta x)."""

    measure: Measure
    delta: float
    kind: Kind
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind.parse(self.kind))
        object.__setattr__(self, "delta", float(self.delta))
        _check_kind(self.kind, self.measure, self.delta)

    @property
    def a(self) -> float:
        return 1.0 / self.delta

    @property
    def k(self) -> int:
        return self.kind.type_multiple

    @cached_property
    def C(self) -> float:
        return self.measure.C

    @cached_property
    def coeff_K(self) -> float:
        return coeff_K(self.measure, self.a)

    @cached_property
    def coeff_L(self) -> float:
        return coeff_L(self.measure, self.a)

    @cached_property
    def coeff_M(self) -> float:
        return coeff_M_extra(self.measure)

    def eval_w(self, w):
        """Evaluate in the node variable w = delta z."""
        flat, shape, is_real = as_points(w)
        if self.kind is Kind.TWO_SIDED:
            vals = _series_K(self.measure, self.a, flat, self.C, self.coeff_K, self.tol)
        else:
            vals = _series_L(self.measure, self.a, flat, self.C, self.coeff_L, self.tol)
            if self.kind is Kind.MAJORANT:
                m, r, _ = split_nodes(flat)
                sr = sinc(r)
                at_zero = m == 0
                sinc_w = np.where(at_zero, sr, sin_over_pi(flat) / np.where(at_zero, 1.0, flat))
                vals = vals + sinc_w * sinc_w * self.coeff_M
        return restore(vals, shape, is_real)

    def __call__(self, z):
        flat, shape, is_real = as_points(z)
        return restore(np.asarray(self.eval_w(flat * self.delta)), shape, is_real)

    def target(self, x):
        x = np.asarray(x, dtype=float)
        pos = x > 0
        out = np.zeros_like(x)
        if np.any(pos):
            out[pos] = self.measure.V(x[pos], 1.0) - self.C
        if np.any(x == 0):
            out = np.where(x == 0, 0.5 * self.measure.jump_height(), out)
        return out[()] if out.ndim == 0 else out

    def target_prime(self, x):
        x = np.asarray(x, dtype=float)
        pos = x > 0
        out = np.zeros_like(x)
        if np.any(pos):
            out[pos] = self.measure.V(x[pos], 1.0, 1)
        return out[()] if out.ndim == 0 else out

    def target_limits_at_zero(self) -> tuple[float, float]:
        return 0.0, self.measure.jump_height()

    def derivative(self, x, h: float = 1e-5):
        x = np.asarray(x, dtype=float)
        return (self(x - 2 * h) - 8 * self(x - h) + 8 * self(x + h) - self(x + 2 * h)) / (12 * h)

    def describe(self) -> dict:
        return {
            "kind": self.kind.value + "nu",
            **self.measure.describe(),
            "delta": self.delta,
            "tol": self.tol,
        }


def eval_Knu(handle: SubordinatedHandle, z):
    if handle.kind is not Kind.TWO_SIDED:
        handle = SubordinatedHandle(handle.measure, handle.delta, Kind.TWO_SIDED, handle.tol)
    return handle(z)


def eval_Lnu(handle: SubordinatedHandle, z):
    if handle.kind is not Kind.MINORANT:
        handle = SubordinatedHandle(handle.measure, handle.delta, Kind.MINORANT, handle.tol)
    return handle(z)


def eval_Mnu(handle: SubordinatedHandle, z):
    if handle.kind is not Kind.MAJORANT:
        handle = SubordinatedHandle(handle.measure, handle.delta, Kind.MAJORANT, handle.tol)
    return handle(z)
