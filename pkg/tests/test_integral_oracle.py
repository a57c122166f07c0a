import math

import numpy as np
import pytest

from bsx.approximants import eval_K, eval_M
from bsx.base_functions import BaseParams
from bsx.errors import DomainError
from bsx.integral_oracle import (
    ExponentialTarget,
    eval_I_k,
    lemma_bound,
    lemma_constant,
    oracle_K_diff,
    oracle_M_diff,
    sign_integrand_K,
    sign_integrand_M,
)

LAMBDAS = [0.1, 1.0, 5.0]
XS = [0.25, -0.25, 0.5, -0.5, 1.5, -1.5, 7.3, -7.3]


def _E(lam, x):
    return math.exp(-lam * x) if x > 0 else 0.0


@pytest.mark.parametrize("lam", LAMBDAS)
@pytest.mark.parametrize("x", XS)
def test_oracle_matches_series(lam, x):
    p = BaseParams(lam, 0.0)
    assert abs(oracle_K_diff(lam, x) - (eval_K(p, x) - _E(lam, x))) <= 1e-8
    assert abs(oracle_M_diff(lam, x) - (eval_M(p, x) - _E(lam, x))) <= 1e-8


def test_oracle_spot_pairs():
    assert abs(oracle_K_diff(1.0, 0.5) - (eval_K(BaseParams(1.0, 0.0), 0.5) - math.exp(-0.5))) <= 1e-9
    assert abs(oracle_K_diff(1.0, -0.5) - eval_K(BaseParams(1.0, 0.0), -0.5)) <= 1e-9
    assert abs(oracle_M_diff(2.0, -1.5) - eval_M(BaseParams(2.0, 0.0), -1.5)) <= 1e-9


@pytest.mark.parametrize("n", [1, 2, 7])
def test_oracle_nodes(n):
    assert oracle_K_diff(1.0, float(n)) == 0.0
    assert oracle_M_diff(1.0, float(n)) == 0.0


@pytest.mark.parametrize("x", [-0.3, -1.5, -4.2, -9.9])
def test_majorant_oracle_nonnegative_left(x):
    assert oracle_M_diff(1.0, x) >= 0.0


def test_oracle_domain():
    with pytest.raises(DomainError):
        oracle_K_diff(1.0, 0.0)
    with pytest.raises(DomainError):
        oracle_M_diff(-1.0, 0.5)


def test_sign_integrands_nonpositive():
    lam = np.linspace(0.0, 20.0, 100)[:, None]
    w = np.linspace(0.0, 20.0, 100)[None, :]
    assert np.max(sign_integrand_K(lam, w)) <= 1e-15
    assert np.max(sign_integrand_M(lam, w)) <= 1e-13


RIGHT = [1.3, 2.3, 0.9 + 0.5j, 3.7 - 0.4j]
LEFT = [-1.7, 0.1, -0.5 + 0.4j, -3.2 - 0.4j]


@pytest.mark.parametrize("k", [1, 2])
@pytest.mark.parametrize("beta", [0.3, 0.7])
def test_contour_identities(k, beta):
    phi = ExponentialTarget(1.0, 1.0)
    for z in RIGHT:
        I = eval_I_k(k, beta, phi, z)
        assert abs(I.value - (phi(z) - phi.series(k, z))) <= 1e-8
    for z in LEFT:
        I = eval_I_k(k, beta, phi, z)
        assert abs(I.value + phi.series(k, z)) <= 1e-8


@pytest.mark.parametrize("k", [1, 2])
def test_contour_spot_example(k):
    phi = ExponentialTarget(1.0, 1.0)
    I = eval_I_k(k, 0.5, phi, 2.3)
    assert abs(I.value - (phi(2.3) - phi.series(k, 2.3))) <= 1e-8
    I = eval_I_k(k, 0.5, phi, -1.7)
    assert abs(I.value + phi.series(k, -1.7)) <= 1e-8


@pytest.mark.parametrize("z", [1.2, 2.5 + 0.3j])
def test_beta_independence(z):
    phi = ExponentialTarget(2.0, 0.5)
    for k in (1, 2):
        a = eval_I_k(k, 0.3, phi, z).value
        b = eval_I_k(k, 0.7, phi, z).value
        assert abs(a - b) <= 1e-8


@pytest.mark.parametrize("k", [1, 2])
@pytest.mark.parametrize("z", [2.3, -1.7, 0.9 + 1.5j])
def test_lemma_bound(k, z):
    phi = ExponentialTarget(1.0, 1.0)
    assert abs(eval_I_k(k, 0.5, phi, z).value) <= lemma_bound(k, 0.5, phi, z)
    assert lemma_constant(k, 0.5, phi) > 0


def test_contour_domain():
    phi = ExponentialTarget(1.0)
    with pytest.raises(DomainError):
        eval_I_k(1, 1.0, phi, 2.0)
    with pytest.raises(DomainError):
        eval_I_k(3, 0.5, phi, 2.0)
    with pytest.raises(DomainError):
        eval_I_k(1, 0.5, phi, 0.5 + 1j)
    with pytest.raises(DomainError):
        phi.series(3, 1.0)


def test_series_matches_approximant_without_constant():
    phi = ExponentialTarget(1.0, 0.5)
    x = 0.37
    # F_1 is K_{a lambda, e^-lambda} without its 1/w block
    full = eval_K(BaseParams(0.5, math.exp(-1.0)), x, check=False)
    block = np.sin(np.pi * x) / (np.pi * x) * (1 / (1 + math.exp(0.5)) - math.exp(-1.0) / 2)
    assert abs(phi.series(1, x) - (full - block)) <= 1e-13
