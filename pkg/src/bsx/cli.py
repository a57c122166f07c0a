"""``bsx`` command line: evaluate approximants, tabulate errors, run certificates.

Exit codes: 0 success / certificate passed, 1 certificate failed, 2 usage
error, 3 constraint violation, 4 numerical non-convergence.
"""
from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import math
import os
import sys

import numpy as np

from .approximants import DEFAULT_TOL, ApproximantHandle, closed_form_error
from .base_functions import BaseParams, Kind
from .errors import ConstraintViolation, DomainError, NonConvergence, Overflow
from .odd_variants import OddHandle
from .subordination import SubordinatedHandle, closed_form_error_nu, parse_measure
from . import verification as ver

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CONSTRAINT, EXIT_NUMERIC = 0, 1, 2, 3, 4

KIND_CHOICES = ["K", "L", "M", "Knu", "Lnu", "Mnu", "K_odd", "L_odd", "M_odd", "Knu_odd", "Lnu_odd", "Mnu_odd",
                "two-sided", "minorant", "majorant"]


class UsageError(Exception):
    pass


def default_tol() -> float:
    text = os.environ.get("BSX_TOL")
    if text is None:
        return DEFAULT_TOL
    try:
        tol = float(text)
    except ValueError:
        raise UsageError(f"BSX_TOL must be a number, got {text!r}") from None
    if not tol > 0:
        raise UsageError("BSX_TOL must be positive")
    return tol


def fmt(v: float) -> str:
    return "%.17g" % v


def _c_value(text: str):
    if text.strip().lower() == "auto":
        return "auto"
    try:
        return float(text)
    except ValueError:
        raise UsageError(f"--c must be a number or 'auto', got {text!r}") from None


def split_kind(text: str) -> tuple[Kind, bool, bool]:
    """(base kind, subordinated?, odd?) from a --kind string such as 'Lnu_odd'."""
    odd = text.endswith("_odd")
    core = text[:-4] if odd else text
    nu = core.endswith("nu")
    core = core[:-2] if nu else core
    try:
        return Kind.parse(core), nu, odd
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def build_handle(kind_text: str, args, lambda_=None, delta=None, measure_text=None):
    kind, nu, odd = split_kind(kind_text)
    lambda_ = args.lambda_ if lambda_ is None else lambda_
    delta = args.delta if delta is None else delta
    measure_text = getattr(args, "measure", None) if measure_text is None else measure_text
    tol = default_tol()
    if nu or (measure_text and lambda_ is None):
        if not measure_text:
            raise UsageError(f"--kind {kind_text} needs --measure")
        try:
            measure = parse_measure(measure_text)
        except (OSError, KeyError) as exc:
            raise UsageError(f"cannot read measure {measure_text!r}: {exc}") from None
        if odd:
            return OddHandle.from_source(kind, measure, delta, tol)
        return SubordinatedHandle(measure, delta, kind, tol)
    if lambda_ is None:
        raise UsageError(f"--kind {kind_text} needs --lambda")
    params = BaseParams(lambda_, _c_value(args.c), delta)
    if odd:
        return OddHandle.from_source(kind, params, tol=tol)
    return ApproximantHandle(kind, params, tol)


def margins(kind: Kind, x, target, approx, delta: float):
    if kind is Kind.TWO_SIDED:
        return np.sin(math.pi * delta * x) * (target - approx)
    if kind is Kind.MINORANT:
        return target - approx
    return approx - target


def write_records(records, fields, fmt_name: str, out):
    if fmt_name == "csv":
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(fields)
        for rec in records:
            writer.writerow([v if isinstance(v, str) else fmt(v) for v in rec])
        return
    for rec in records:
        parts = []
        for name, v in zip(fields, rec):
            if isinstance(v, str):
                parts.append(f"{json.dumps(name)}: {json.dumps(v)}")
            elif math.isfinite(v):
                parts.append(f"{json.dumps(name)}: {fmt(v)}")
            else:
                parts.append(f"{json.dumps(name)}: {json.dumps(v)}")
        out.write("{" + ", ".join(parts) + "}\n")


# --------------------------------------------------------------------------
# commands


def cmd_eval(args, out) -> int:
    handle = build_handle(args.kind, args)
    try:
        grid = ver.GridSpec.parse(args.grid)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    x = grid.points(handle.delta)
    target = np.asarray(handle.target(x), dtype=float)
    approx = np.real(np.asarray(handle(x), dtype=complex))
    with np.errstate(invalid="ignore"):
        marg = margins(Kind.parse(handle.kind), x, target, approx, handle.delta)
    write_records(zip(x, target, approx, marg), ["x", "target", "approx", "margin"], args.format, out)
    return EXIT_OK


def _float_list(text: str, name: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",")]
    except ValueError:
        raise UsageError(f"{name} must be a comma-separated list of numbers, got {text!r}") from None


def cmd_errors(args, out) -> int:
    kinds = [Kind.TWO_SIDED, Kind.MINORANT, Kind.MAJORANT] if args.all_kinds else [Kind.parse(args.kind or "K")]
    deltas = _float_list(args.delta_list, "--delta")
    if args.measure:
        sources = [("measure", m) for m in args.measure]
    elif args.lambda_list is not None:
        sources = [("lambda", v) for v in _float_list(args.lambda_list, "--lambda")]
    else:
        raise UsageError("errors needs --lambda or --measure")
    fields = ["source", "delta", "kind", "closed_form"] + (["numeric", "relative_mismatch"] if args.check else [])
    rows = []
    for (what, src), delta, kind in itertools.product(sources, deltas, kinds):
        if what == "measure":
            measure = parse_measure(src)
            closed = closed_form_error_nu(kind, measure, delta)
            handle = SubordinatedHandle(measure, delta, kind, default_tol()) if args.check else None
            label = src
        else:
            params = BaseParams(src, _c_value(args.c), delta)
            closed = closed_form_error(kind, params)
            handle = ApproximantHandle(kind, params, default_tol()) if args.check else None
            label = f"lambda={fmt(src)},c={fmt(params.c)}"
        row = [label, delta, kind.name.lower().replace("_", "-"), closed]
        if args.check:
            numeric = float(ver.numeric_l1_error(handle).value)
            row += [numeric, abs(numeric - closed) / abs(closed)]
        rows.append(row)
    write_records(rows, fields, args.format, out)
    return EXIT_OK


def cmd_verify(args, out) -> int:
    check = args.check_name
    if check == "identity":
        fn = {"step": ver.identity_step, "exponential": ver.identity_exponential, "poisson": ver.identity_poisson}
        cert = fn[args.name]()
    else:
        kind_text = args.kind or {"sign": "K", "onesided": "L", "nodes": "K", "type": "K", "l1": "K"}[check]
        handle = build_handle(kind_text, args)
        if check == "sign":
            cert = ver.verify_sign_two_sided(handle, None, _grid(args))
        elif check == "onesided":
            cert = ver.verify_one_sided(handle, None, None, _grid(args))
        elif check == "nodes":
            lo, hi = _range(args.range)
            cert = ver.verify_nodes(handle, None, (lo, hi), args.derivatives)
        elif check == "type":
            cert = ver.estimate_exponential_type(handle, args.k, args.ymax)
        else:
            kind, _, odd = split_kind(kind_text)
            if odd:
                raise UsageError("l1 verification covers truncated kinds only")
            if isinstance(handle, SubordinatedHandle):
                expected = closed_form_error_nu(kind, handle.measure, handle.delta)
            else:
                expected = closed_form_error(kind, handle.params)
            cert = ver.verify_l1(handle, expected, args.rel_tol)
    text = cert.to_json() + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)
    return EXIT_OK if cert.passed else EXIT_FAIL


def _grid(args) -> ver.GridSpec:
    try:
        return ver.GridSpec.parse(args.grid)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _range(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(v) for v in text.split(":"))
    except ValueError:
        raise UsageError(f"--range must look like lo:hi, got {text!r}") from None
    return lo, hi


# --------------------------------------------------------------------------
# parser


def _add_problem_args(p, kind_default=None):
    p.add_argument("--kind", default=kind_default, choices=KIND_CHOICES)
    p.add_argument("--lambda", dest="lambda_", type=float, default=None)
    p.add_argument("--c", default="auto", help="shift c, or 'auto' for exp(-lambda/delta)")
    p.add_argument("--delta", type=float, default=1.0)
    p.add_argument("--measure", default=None, help="power:alpha=A | atoms:l:w[,l:w...] | table:PATH")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bsx", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate an approximant and its target on a grid")
    _add_problem_args(p, "K")
    p.add_argument("--grid", required=True, help="min:max:count[:uniform|log|chebyshev]")
    p.add_argument("--format", choices=["jsonl", "csv"], default="jsonl")

    p = sub.add_parser("errors", help="tabulate closed-form minimal errors")
    p.add_argument("--kind", default=None, choices=["K", "L", "M", "two-sided", "minorant", "majorant"])
    p.add_argument("--all-kinds", action="store_true")
    p.add_argument("--lambda", dest="lambda_list", default=None, help="comma-separated rates")
    p.add_argument("--measure", action="append", default=None)
    p.add_argument("--c", default="auto")
    p.add_argument("--delta", dest="delta_list", default="1")
    p.add_argument("--check", action="store_true", help="add the numeric L1 error and the relative mismatch")
    p.add_argument("--format", choices=["jsonl", "csv"], default="jsonl")

    p = sub.add_parser("verify", help="run a certificate and emit it as JSON")
    vsub = p.add_subparsers(dest="check_name", required=True)
    for name, help_text in [
        ("sign", "two-sided sign condition on a grid"),
        ("onesided", "minorant/majorant inequality on a grid"),
        ("nodes", "interpolation at the nodes"),
        ("type", "growth along the imaginary axis"),
        ("l1", "numeric L1 error against the closed form"),
    ]:
        q = vsub.add_parser(name, help=help_text)
        _add_problem_args(q)
        q.add_argument("--out", default=None, help="write the certificate here instead of stdout")
        if name in ("sign", "onesided"):
            q.add_argument("--grid", default="-20:20:100000:chebyshev")
        if name == "nodes":
            q.add_argument("--range", default="-20:20")
            q.add_argument("--derivatives", action="store_true")
        if name == "type":
            q.add_argument("--k", type=int, choices=[1, 2], default=None)
            q.add_argument("--ymax", type=float, default=20.0)
        if name == "l1":
            q.add_argument("--rel-tol", type=float, default=1e-6)
    q = vsub.add_parser("identity", help="integral identities for the step and the exponential")
    q.add_argument("--name", choices=["step", "exponential", "poisson"], required=True)
    q.add_argument("--out", default=None)
    return parser


_VALUE_FLAGS = ("--grid", "--range", "--lambda", "--c", "--delta")


def _glue_values(argv: list[str]) -> list[str]:
    """Turn ``--grid -5:5:11`` into ``--grid=-5:5:11`` so argparse does not
    mistake a leading minus sign for an option."""
    out, i = [], 0
    while i < len(argv):
        if argv[i] in _VALUE_FLAGS and i + 1 < len(argv):
            out.append(f"{argv[i]}={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(_glue_values(sys.argv[1:] if argv is None else list(argv)))
    except SystemExit as exc:
        return int(exc.code or 0)
    commands = {"eval": cmd_eval, "errors": cmd_errors, "verify": cmd_verify}
    try:
        return commands[args.command](args, out)
    except UsageError as exc:
        print(f"bsx: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConstraintViolation as exc:
        print(f"bsx: constraint violated: {exc}", file=sys.stderr)
        return EXIT_CONSTRAINT
    except (NonConvergence, Overflow) as exc:
        print(f"bsx: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (DomainError, ValueError) as exc:
        print(f"bsx: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def run(argv) -> tuple[int, str]:
    """Run the CLI in-process and return what it wrote (for tests)."""
    buf = io.StringIO()
    code = main(argv, buf)
    return code, buf.getvalue()
