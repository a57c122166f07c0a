import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bsx.errors import DomainError, NonConvergence
from bsx.numerics import (
    QuadResult,
    SumResult,
    alternating_hurwitz,
    digamma,
    euler_maclaurin_tail,
    integrate_finite,
    integrate_semi_infinite,
    integrate_vertical_line,
    sum_absolute,
    sum_alternating,
    trigamma,
)


# --- result records ---------------------------------------------------------


def test_result_records_validate():
    with pytest.raises(ValueError):
        QuadResult(1.0, -1.0, 3)
    with pytest.raises(ValueError):
        QuadResult(1.0, 0.0, 0)
    with pytest.raises(ValueError):
        SumResult(1.0, 0.0, 0)


# --- special functions ------------------------------------------------------

SPECIAL_POINTS = [0.25, 0.5, 1.0, 3.7, 25.0, 0.3 + 2j, 1.5 - 7j, 0.8 + 40j, 12 + 0.1j]


@pytest.mark.parametrize("w", SPECIAL_POINTS)
def test_digamma_trigamma_against_mpmath(w):
    assert abs(digamma(w) - complex(mpmath.digamma(w))) <= 1e-14 * max(1.0, abs(mpmath.digamma(w)))
    ref = complex(mpmath.psi(1, w))
    assert abs(trigamma(w) - ref) <= 2e-14 * max(1.0, abs(ref))


@pytest.mark.parametrize("s", [0.5, 1.0, 2.3, 0.7 + 3j, 9 - 2j])
def test_alternating_hurwitz(s):
    ref = complex(mpmath.nsum(lambda k: (-1) ** k / (k + mpmath.mpc(s)), [0, mpmath.inf]))
    assert abs(alternating_hurwitz(s) - ref) <= 1e-13


def test_special_domain():
    with pytest.raises(DomainError):
        digamma(0.1)
    with pytest.raises(DomainError):
        alternating_hurwitz(0.4)


# --- quadrature -------------------------------------------------------------


def test_exponential_integral():
    res = integrate_semi_infinite(lambda t: np.exp(-t), tol=1e-12)
    assert abs(res.value - 1.0) <= 1e-12
    assert res.abs_err >= 0 and res.evals >= 1


def test_gamma_half_singular_endpoint():
    res = integrate_semi_infinite(lambda t: t**-0.5 * np.exp(-t), singular_exponent=0.5, tol=1e-12)
    assert abs(res.value - math.sqrt(math.pi)) <= 1e-11
    # also without declaring the singularity
    res = integrate_semi_infinite(lambda t: t**-0.5 * np.exp(-t), tol=1e-10)
    assert abs(res.value - math.sqrt(math.pi)) <= max(res.abs_err, 1e-10)


def _bracket(lam):
    # 1/l - e^-l/2 - 1/(e^l - 1): grouped near 0 (series), direct far out
    small = lam < 1e-2
    m = np.where(small, lam, 1.0)
    near = -0.5 * np.expm1(-m) - m / 12.0 + m**3 / 720.0
    safe = np.where(small, 1.0, lam)
    with np.errstate(over="ignore"):
        direct = 1.0 / safe - 0.5 * np.exp(-safe) - 1.0 / np.expm1(safe)
    return np.where(small, near, direct)


def test_coefficient_style_integral_two_schemes():
    f = lambda lam: _bracket(lam) / lam
    exp_sinh = integrate_semi_infinite(f, decay=0.0, tol=1e-11)
    # independent split: tanh-sinh on (0, 1] plus exp-sinh beyond
    split = integrate_finite(f, 0.0, 1.0, tol=1e-12).value + integrate_semi_infinite(
        f, lower=1.0, decay=0.0, tol=1e-12
    ).value
    assert exp_sinh.value > 0
    assert abs(exp_sinh.value - split) <= 1e-10
    # closed form: the integral equals ln(2 pi)/2
    assert abs(exp_sinh.value - 0.5 * math.log(2 * math.pi)) <= 1e-10


def test_quadrature_and_summation_agree():
    quad = integrate_semi_infinite(lambda t: np.exp(-t) / (1 + np.exp(-t)), tol=1e-12).value
    series = sum_alternating(lambda n: (-1.0) ** (n + 1) / n, tol=1e-12).value
    assert abs(quad - series) <= 1e-10
    assert abs(quad - math.log(2)) <= 1e-12


@given(
    st.floats(0.2, 5.0),
    st.floats(0.2, 5.0),
    st.floats(-3.0, 3.0),
    st.floats(-3.0, 3.0),
)
def test_linearity(r1, r2, a, b):
    f = lambda t: np.exp(-r1 * t)
    g = lambda t: np.exp(-r2 * t) * (1 + t)
    fr = integrate_semi_infinite(f, decay=min(r1, r2))
    gr = integrate_semi_infinite(g, decay=min(r1, r2))
    hr = integrate_semi_infinite(lambda t: a * f(t) + b * g(t), decay=min(r1, r2))
    assert abs(hr.value - (a * fr.value + b * gr.value)) <= 2 * (
        hr.abs_err + abs(a) * fr.abs_err + abs(b) * gr.abs_err
    ) + 1e-14


@pytest.mark.parametrize(
    "f, exact",
    [
        (lambda t: np.exp(-2 * t) * t**2, 0.25),
        (lambda t: np.exp(-t) * np.cos(t), 0.5),
        (lambda t: np.log(t) * np.exp(-t), -0.5772156649015329),
        (lambda t: (1.0 / (1.0 + t)) ** 2, 1.0),
    ],
)
def test_abs_err_bounds_true_error(f, exact):
    decay = 0.0 if exact == 1.0 else 1.0
    res = integrate_semi_infinite(f, decay=decay, tol=1e-9)
    assert abs(res.value - exact) <= max(res.abs_err, 1e-15)


def test_finite_log_singularity():
    res = integrate_finite(lambda x: np.log(x), 0.0, 1.0, tol=1e-12)
    assert abs(res.value + 1.0) <= 1e-12
    rev = integrate_finite(lambda x: np.log(x), 1.0, 0.0, tol=1e-12)
    assert abs(rev.value - 1.0) <= 1e-12


def test_quadrature_domain_errors():
    with pytest.raises(DomainError):
        integrate_semi_infinite(lambda t: t, singular_exponent=1.0)
    with pytest.raises(DomainError):
        integrate_semi_infinite(lambda t: t, decay=-1.0)
    with pytest.raises(DomainError):
        integrate_vertical_line(lambda w: w, 1.0, math.pi)
    with pytest.raises(DomainError):
        integrate_vertical_line(lambda w: w, 0.5, 0.0)


def test_nonconvergence_raised():
    with pytest.raises(NonConvergence):
        integrate_finite(lambda x: np.sin(1.0 / x) / x, 0.0, 1.0, tol=1e-14, max_level=5)


def test_vertical_line_zero_function():
    res = integrate_vertical_line(lambda w: 0.0 * w, 0.5, 2 * math.pi)
    assert res.value == 0


def test_vertical_line_secant():
    # on Re w = 1/2, sin(pi w) = cosh(pi v), and int pi/cosh(pi v) dv = pi
    res = integrate_vertical_line(lambda w: math.pi / np.sin(math.pi * w), 0.5, math.pi, tol=1e-12)
    assert abs(res.value - 0.5) <= 1e-11


# --- series -----------------------------------------------------------------


def test_alternating_log2():
    res = sum_alternating(lambda n: (-1.0) ** (n + 1) / n, tol=1e-12)
    assert abs(res.value - math.log(2)) <= 1e-12


def test_alternating_geometric_is_b1():
    res = sum_alternating(lambda n: (-1.0) ** (n + 1) * np.exp(-n), tol=1e-13)
    assert abs(res.value - 1 / (1 + math.e)) <= 1e-13
    assert abs(res.value - 0.2689414214) <= 1e-10


def test_alternating_log_coefficients():
    x = 0.5
    term = lambda n: (-1.0) ** (n + 1) * np.log(n) / (x - n)
    res = sum_alternating(term, tol=1e-11)
    # pairing-of-terms oracle: average of consecutive partial sums at N = 1e6
    n = np.arange(1, 1_000_001, dtype=float)
    total = math.fsum(term(n))
    paired = total + 0.5 * float(term(np.array([1_000_001.0]))[0])
    assert abs(res.value - paired) <= 1e-9


def test_alternating_complex_terms():
    z = 0.3 + 1.2j
    res = sum_alternating(lambda n: (-1.0) ** n / (z - n), tol=1e-12)
    ref = complex(mpmath.nsum(lambda n: (-1) ** n / (mpmath.mpc(z) - n), [1, mpmath.inf]))
    assert abs(res.value - ref) <= 1e-12


def test_absolute_basel():
    res = sum_absolute(lambda n: 1.0 / n**2, lambda N: 1.0 / N, tol=1e-5)
    assert abs(res.value - math.pi**2 / 6) <= res.abs_err <= 1e-5
    assert res.terms_used >= 1


def test_absolute_polylog():
    res = sum_absolute(lambda n: np.exp(-n) / n**2, lambda N: math.exp(-N) / N**2 / (1 - math.exp(-1)), tol=1e-14)
    assert abs(res.value - float(mpmath.polylog(2, mpmath.exp(-1)))) <= 1e-14


def test_absolute_log_over_square_with_tail():
    # Euler-Maclaurin remainder for f(n) = log n / n^2; bound from the next term
    def tail(N):
        N = float(N)
        f0 = math.log(N) / N**2
        f1 = (1 - 2 * math.log(N)) / N**3
        f3 = (-26 + 24 * math.log(N)) / N**5
        integral = (math.log(N) + 1) / N
        return euler_maclaurin_tail(integral, [f0, f1, 0.0, f3])[0] - f0

    bound = lambda N: 10.0 * math.log(N) / N**6
    res = sum_absolute(lambda n: np.log(n) / n**2, bound, tol=1e-12, tail=tail)
    assert abs(res.value - float(-mpmath.zeta(2, derivative=1))) <= 1e-12


def test_absolute_budget_exhausted():
    with pytest.raises(NonConvergence):
        sum_absolute(lambda n: 1.0 / n**2, lambda N: 1.0 / N, tol=1e-9, max_terms=1000)


def test_euler_maclaurin_tail_zeta3():
    N = 10
    derivs = [(-1) ** j * math.factorial(j + 2) / 2 / N ** (3 + j) for j in range(8)]
    est, last = euler_maclaurin_tail(1 / (2 * N**2), derivs)
    ref = float(mpmath.zeta(3, N))
    assert abs(est - ref) <= 1e-10
    assert last < 1e-8
