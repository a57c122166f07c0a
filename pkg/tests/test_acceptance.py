"""Acceptance criteria, one test each.

Every test prints a single ``PASS criterion N: ...`` or ``FAIL criterion N: ...``
line (shown even without ``-s``) and then asserts the verdict.
"""
import math
import time

import numpy as np
import pytest

from bsx.approximants import ApproximantHandle, closed_form_error, eval_K, eval_L, eval_M
from bsx.base_functions import BaseParams, Kind
from bsx.cli import run
from bsx.errors import ConstraintViolation
from bsx.integral_oracle import ExponentialTarget, eval_I_k, oracle_K_diff, oracle_M_diff
from bsx.subordination import Atoms, PowerDensity, SubordinatedHandle
from bsx.verification import (
    Certificate,
    estimate_exponential_type,
    identity_exponential,
    identity_poisson,
    identity_step,
    numeric_l1_error,
    verify_nodes,
)

LAMBDAS = (0.1, 1.0, 5.0)
DELTAS = (1.0, 2.0)
GRID_PARAMS = [BaseParams(lam, "auto", d) for lam in LAMBDAS for d in DELTAS]
KINDS = (Kind.TWO_SIDED, Kind.MINORANT, Kind.MAJORANT)


@pytest.fixture
def report(capsys):
    def _report(n: int, ok: bool, summary: str):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {n}: {summary}")
        assert ok, summary

    return _report


def test_criterion_1_closed_form_errors(report):
    start = time.perf_counter()
    worst = 0.0
    for params in GRID_PARAMS:
        for kind in KINDS:
            numeric = numeric_l1_error(ApproximantHandle(kind, params)).value
            closed = closed_form_error(kind, params)
            worst = max(worst, abs(numeric - closed) / closed)
    elapsed = time.perf_counter() - start
    spot = [closed_form_error(k, BaseParams(1.0, math.exp(-1.0))) for k in KINDS]
    # error formulas at lambda = delta = 1, c = 1/e
    e1 = math.exp(-1.0)
    formulas = [math.tanh(0.5) - e1 / 2, 1 - 1 / (math.e - 1) - e1 / 2, 1 / (1 - e1) - 1 - e1 / 2]
    spot_err = max(abs(a - b) for a, b in zip(spot, formulas))
    ok = worst <= 1e-6 and elapsed <= 60.0 and spot_err <= 1e-15
    report(
        1,
        ok,
        f"max relative mismatch {worst:.2e} over 18 cases in {elapsed:.1f}s; "
        f"spot values {spot[0]:.10f} / {spot[1]:.10f} / {spot[2]:.10f}",
    )


def test_criterion_2_identities(report):
    certs = {"step": identity_step(), "exponential": identity_exponential(), "poisson": identity_poisson()}
    diffs = {name: abs(c.details["numeric"] - c.details["expected"]) for name, c in certs.items()}
    expected = {"step": 0.5, "exponential": (1 - math.exp(-1)) / (1 + math.exp(-1)), "poisson": 1 / (1 - math.exp(-1)) - 1}
    exp_ok = all(abs(certs[n].details["expected"] - v) <= 1e-15 for n, v in expected.items())
    ok = exp_ok and all(d <= 1e-6 for d in diffs.values()) and all(c.passed for c in certs.values())
    report(2, ok, ", ".join(f"{n} off by {d:.1e}" for n, d in diffs.items()))


def test_criterion_3_inequality_certificates(report):
    worst, failures = math.inf, []
    commands = []
    for p in GRID_PARAMS:
        base = f"--lambda {p.lambda_!r} --c auto --delta {p.delta!r} --grid -20:20:100000:chebyshev"
        commands.append(f"verify sign --kind K {base}")
        commands.append(f"verify onesided --kind L {base}")
        commands.append(f"verify onesided --kind M {base}")
    commands.append("verify sign --kind Knu --measure power:alpha=1 --delta 1 --grid -30:30:100000:log")
    commands.append("verify onesided --kind Lnu --measure power:alpha=1 --delta 1 --grid -30:30:100000:log")
    for cmd in commands:
        code, out = run(cmd.split())
        cert = Certificate.from_json(out) if out else None
        if code != 0 or cert is None or cert.worst_margin < -1e-9:
            failures.append(cmd)
        if cert is not None:
            worst = min(worst, cert.worst_margin)
    report(3, not failures, f"{len(commands) - len(failures)}/{len(commands)} certificates exit 0, worst margin {worst:.2e}")


def test_criterion_4_oracle_equivalence(report):
    xs = (0.25, -0.25, 0.5, -0.5, 1.5, -1.5, 7.3, -7.3)
    oracle_err = 0.0
    for lam in LAMBDAS:
        p = BaseParams(lam, 0.0)
        for x in xs:
            E = math.exp(-lam * x) if x > 0 else 0.0
            oracle_err = max(oracle_err, abs(oracle_K_diff(lam, x) - (eval_K(p, x) - E)))
            oracle_err = max(oracle_err, abs(oracle_M_diff(lam, x) - (eval_M(p, x) - E)))
    right = (1.3, 2.3, 0.9 + 0.5j, 3.7 - 0.4j)
    left = (-1.7, 0.1, -0.5 + 0.4j, -3.2 - 0.4j)
    phi = ExponentialTarget(1.0, 1.0)
    contour_err = 0.0
    for k in (1, 2):
        for beta in (0.3, 0.7):
            for z in right:
                contour_err = max(contour_err, abs(eval_I_k(k, beta, phi, z).value - (phi(z) - phi.series(k, z))))
            for z in left:
                contour_err = max(contour_err, abs(eval_I_k(k, beta, phi, z).value + phi.series(k, z)))
    ok = oracle_err <= 1e-8 and contour_err <= 1e-8
    report(4, ok, f"oracle vs series {oracle_err:.1e}, contour identities {contour_err:.1e}")


def test_criterion_5_point_mass_reduction(report):
    rng = np.random.default_rng(20240501)
    z = rng.uniform(-10, 10, 50) + 1j * rng.uniform(-3, 3, 50)
    worst = 0.0
    for lam0 in (0.5, 1.0, 3.0):
        base = BaseParams(lam0, math.exp(-lam0), 1.0)
        for kind, fn in (("K", eval_K), ("L", eval_L), ("M", eval_M)):
            h = SubordinatedHandle(Atoms((lam0,), (1.0,)), 1.0, kind)
            worst = max(worst, float(np.max(np.abs(h(z) - fn(base, z)))))
    report(5, worst <= 1e-9, f"max |subordinated - base| = {worst:.1e} at 50 complex points, delta = 1")


def test_criterion_6_node_suite(report):
    val, der, passed = 0.0, 0.0, True
    for p in GRID_PARAMS:
        for kind in KINDS:
            cert = verify_nodes(ApproximantHandle(kind, p), n_range=(-20, 20), with_derivatives=kind is not Kind.TWO_SIDED)
            passed &= cert.passed
            val = max(val, cert.details["max_value_residual"])
            der = max(der, cert.details.get("max_derivative_residual", 0.0))
    ok = passed and val <= 1e-9 and der <= 1e-7
    report(6, ok, f"value residual {val:.1e}, derivative residual {der:.1e}")


def test_criterion_7_growth_gatekeeping(report):
    outcome = {}
    for alpha in (0.5, 1.0, 1.2, 1.9):
        try:
            SubordinatedHandle(PowerDensity(alpha), 1.0, "M")
            maj = True
        except ConstraintViolation:
            maj = False
        SubordinatedHandle(PowerDensity(alpha), 1.0, "L")  # raises if rejected
        outcome[alpha] = maj
    ok = outcome == {0.5: False, 1.0: False, 1.2: True, 1.9: True}
    report(7, ok, "majorant accepted for " + str([a for a, v in outcome.items() if v]) + ", minorant for all four")


def test_criterion_8_type_estimation(report):
    parts, ok = [], True
    for kind, delta in (("K", 1.0), ("K", 2.0), ("M", 1.0), ("L", 1.0)):
        h = ApproximantHandle(Kind.parse(kind), BaseParams(1.0, "auto", delta))
        cert = estimate_exponential_type(h)
        dev = cert.details["relative_deviation"]
        ok &= cert.passed and abs(dev) <= 0.05
        parts.append(f"{kind}(delta={delta:g}) {dev:+.1%}")
    report(8, ok, "slope deviations " + ", ".join(parts))


def test_criterion_9_budget_identity(report):
    closed_err, numeric_err = 0.0, 0.0
    for p in GRID_PARAMS:
        budget = (1.0 - p.c) / p.delta
        closed = closed_form_error(Kind.MINORANT, p) + closed_form_error(Kind.MAJORANT, p)
        numeric = (
            numeric_l1_error(ApproximantHandle(Kind.MINORANT, p)).value
            + numeric_l1_error(ApproximantHandle(Kind.MAJORANT, p)).value
        )
        closed_err = max(closed_err, abs(closed - budget))
        numeric_err = max(numeric_err, abs(numeric - budget))
    ok = closed_err <= 1e-12 and numeric_err <= 2e-6
    report(9, ok, f"closed-form gap {closed_err:.1e}, numeric gap {numeric_err:.1e}")
