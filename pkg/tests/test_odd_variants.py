import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bsx.approximants import eval_K, eval_L, eval_M
from bsx.base_functions import BaseParams, Kind
from bsx.errors import ConstraintViolation
from bsx.odd_variants import OddHandle, eval_K_odd, eval_L_odd, eval_M_odd, eval_T_odd
from bsx.subordination import Atoms, PowerDensity, SubordinatedHandle

P1 = BaseParams(1.0, math.exp(-1.0))
PARAMS = [P1, BaseParams(1.0, 0.0), BaseParams(0.1, 0.5), BaseParams(5.0, "auto", 2.0), BaseParams(0.5, 0.2, 0.5)]


def test_T_odd_values():
    assert eval_T_odd(P1, 0.0) == 0.0
    assert eval_T_odd(BaseParams(1.0, 0.0), 2.0) == pytest.approx(math.exp(-2.0), abs=1e-16)
    assert eval_T_odd(BaseParams(1.0, 0.0), -2.0) == pytest.approx(-math.exp(-2.0), abs=1e-16)


@given(st.floats(-50, 50, allow_nan=False))
def test_T_odd_is_odd(x):
    assert eval_T_odd(P1, x) == -eval_T_odd(P1, -x)


def test_T_odd_measure():
    m = PowerDensity(1.0)
    x = np.array([0.0, 0.5, 2.0])
    vals = eval_T_odd(m, x)
    assert vals[0] == 0.0
    np.testing.assert_allclose(vals[1:], -np.log(x[1:]), atol=1e-15)


@pytest.mark.parametrize("params", PARAMS)
def test_K_odd_is_odd(params, rng):
    z = rng.uniform(-10, 10, 40) + 1j * rng.uniform(-2, 2, 40)
    h = OddHandle.from_source("K", params)
    assert np.max(np.abs(h(z) + h(-z))) <= 1e-10


@pytest.mark.parametrize("params", PARAMS)
def test_compositions(params, rng):
    z = rng.uniform(-8, 8, 20) + 1j * rng.uniform(-1, 1, 20)
    np.testing.assert_allclose(eval_K_odd(params, z), eval_K(params, z) - eval_K(params, -z), atol=1e-14)
    np.testing.assert_allclose(eval_L_odd(params, z), eval_L(params, z) - eval_M(params, -z), atol=1e-14)
    np.testing.assert_allclose(eval_M_odd(params, z), eval_M(params, z) - eval_L(params, -z), atol=1e-14)


@pytest.mark.parametrize("params", PARAMS)
def test_sandwich_and_sign(params, rng):
    x = np.concatenate([rng.uniform(-20, 20, 2000), np.linspace(-3, 3, 601) + 1e-4])
    T = eval_T_odd(params, x)
    tol = 1e-9
    assert np.min(T - eval_L_odd(params, x)) >= -tol
    assert np.min(eval_M_odd(params, x) - T) >= -tol
    K = eval_K_odd(params, x)
    assert np.min(np.sin(np.pi * params.delta * x) * (T - K)) >= -tol


@pytest.mark.parametrize("params", PARAMS)
def test_gap_is_sinc_pair(params):
    x = np.linspace(-6, 6, 241) + 0.0123
    d = params.delta
    sinc2 = np.sinc(d * x) ** 2
    gap = eval_M_odd(params, x) - eval_L_odd(params, x)
    # M - L = (1 - c) sinc^2(delta x) is even, so the odd gap doubles it
    np.testing.assert_allclose(gap, 2 * (1 - params.c) * sinc2, atol=1e-12)
    assert np.min(gap) >= 0


@pytest.mark.parametrize("kind", ["K", "L", "M"])
@pytest.mark.parametrize("params", PARAMS)
def test_node_interpolation(kind, params):
    n = np.concatenate([np.arange(-20, 0), np.arange(1, 21)]).astype(float) / params.delta
    h = OddHandle.from_source(kind, params)
    assert np.max(np.abs(h(n) - h.target(n))) <= 1e-9


def test_base_constraint():
    bad = BaseParams(1.0, 0.9)
    for fn in (eval_K_odd, eval_L_odd, eval_M_odd):
        with pytest.raises(ConstraintViolation):
            fn(bad, 0.3)


def test_measure_constraints():
    log = PowerDensity(1.0)
    assert np.isfinite(eval_K_odd(log, 0.3))
    with pytest.raises(ConstraintViolation):
        eval_L_odd(log, 0.3)
    with pytest.raises(ConstraintViolation):
        eval_M_odd(log, 0.3)
    with pytest.raises(ConstraintViolation):
        eval_K_odd(log, 0.3, delta=0.5)


def test_measure_sandwich():
    m = PowerDensity(1.5)
    x = np.linspace(-8, 8, 801) + 1e-3
    T = eval_T_odd(m, x)
    assert np.min(T - eval_L_odd(m, x)) >= -1e-9
    assert np.min(eval_M_odd(m, x) - T) >= -1e-9
    assert np.min(np.sin(np.pi * x) * (T - eval_K_odd(m, x))) >= -1e-9


def test_point_mass_matches_base(rng):
    z = rng.uniform(-5, 5, 10) + 1j * rng.uniform(-1, 1, 10)
    m = Atoms((1.0,), (1.0,))
    for fn in (eval_K_odd, eval_L_odd, eval_M_odd):
        np.testing.assert_allclose(fn(m, z), fn(P1, z), atol=1e-9)


def test_handle_metadata():
    h = OddHandle.from_source("L", P1)
    assert h.kind is Kind.MINORANT and h.k == 2 and h.delta == 1.0
    assert h.describe()["kind"].endswith("_odd")
    lo, hi = h.target_limits_at_zero()
    assert lo == -hi and hi == pytest.approx(1 - math.exp(-1))
    sub = OddHandle.from_source("K", SubordinatedHandle(PowerDensity(1.5), 1.0, "K"))
    assert sub.delta == 1.0
    with pytest.raises(TypeError):
        OddHandle.from_source("K", 3.0)
    x = 0.7
    fd = (h(x + 1e-6) - h(x - 1e-6)) / 2e-6
    assert h.derivative(x) == pytest.approx(fd, rel=1e-6)
