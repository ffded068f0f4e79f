"""Command line front end.

Four subcommands: ``identity`` checks the weighted endpoint identity at one
point, ``bound`` evaluates a single bound and verifies lhs <= rhs, ``certify``
runs the sampling convexity certifier on a function, and ``sweep`` crosses a
parameter grid and writes a CSV of records.

Exit codes: 0 success, 1 a checked inequality or residual failed, 2 usage or
input errors, 3 quadrature could not reach tolerance. All numeric output is
printed to 12 significant digits.
"""

from __future__ import annotations

import argparse
import sys
from enum import IntEnum

from .errors import (
    CsvSchemaError,
    DerivativeSingularityError,
    DomainError,
    ParseError,
    QuadratureToleranceError,
)
from .funcmodel import CERT_SAMPLES, FunctionModel, certify_pointwise, parse_function
from .hh_core import (
    BoundReport,
    ProblemInstance,
    TheoremId,
    bound_classical,
    bound_t21,
    bound_t22,
    bound_t23,
    bound_t24,
    hh_sandwich_with_error,
    identity_lhs_with_error,
    identity_rhs_with_error,
)
from .rlint import DEFAULT_CONFIG
from .sweep import (
    apply_derivative_shrink,
    format_summary,
    grid_from_config_text,
    render_svg,
    run_sweep,
    standard_config_text,
    summarize,
    write_csv,
)

__all__ = ["ExitCode", "main"]


class ExitCode(IntEnum):
    OK = 0
    FAILURE = 1
    USAGE = 2
    QUADRATURE = 3


# slack granted when comparing lhs <= rhs, relative to the bound's size
BOUND_SLACK = 1e-9

_SHRINK_FRACTION = 1e-9

_FRACTIONAL = {
    "t21": bound_t21,
    "t22": bound_t22,
    "t23": bound_t23,
    "t24": bound_t24,
}
_NEEDS_Q = {"t22", "t23", "t24", "c14", "c15", "c16"}

_CONVENTION_NOTES = {
    "t22": "note: each endpoint bracket averages |f'(x)|^q with that endpoint's |f'|^q",
    "c14": "note: each endpoint bracket averages |f'(x)|^q with that endpoint's |f'|^q",
    "c16": "note: endpoint derivative weights are (x-a)^2 and (b-x)^2 over (b-a)",
}


def _g12(v: float) -> str:
    return format(v, ".12g")


def _shrink_for_derivative(f: FunctionModel, a: float) -> tuple[FunctionModel, float, str | None]:
    """Nudge a off the left edge when f' is unbounded there."""
    if not f.has_singular_derivative:
        return f, a, None
    lo = f.lo + _SHRINK_FRACTION * (f.hi - f.lo)
    note = (
        f"note: f' is unbounded at {_g12(f.lo)}; "
        f"working on [{_g12(lo)}, {_g12(f.hi)}] instead"
    )
    return f.with_domain(lo, f.hi), max(a, lo), note


def _print_certification(report: BoundReport) -> None:
    cert = report.certification
    if report.hypothesis_certified:
        print(f"hypothesis certified: yes ({cert.samples} samples, seed {cert.seed})")
    else:
        x, y, lam = cert.witness
        print(
            "hypothesis certified: NO "
            f"(worst violation {_g12(cert.worst_violation)} at "
            f"x={_g12(x)}, y={_g12(y)}, lam={_g12(lam)}); "
            "the bound is not asserted for this function"
        )


def _cmd_identity(args: argparse.Namespace) -> ExitCode:
    f = parse_function(args.f)
    f, a, note = _shrink_for_derivative(f, args.a)
    if note:
        print(note)
    inst = ProblemInstance(f, a, args.b, args.x, args.alpha, 1.0)
    lhs, lerr = identity_lhs_with_error(inst, DEFAULT_CONFIG)
    rhs, rerr = identity_rhs_with_error(inst, DEFAULT_CONFIG)
    residual = abs(lhs - rhs)
    tol = args.tol * (1.0 + abs(lhs))
    print(f"lhs = {_g12(lhs)} (quadrature error est {_g12(lerr)})")
    print(f"rhs = {_g12(rhs)} (quadrature error est {_g12(rerr)})")
    print(f"residual = {_g12(residual)} (tolerance {_g12(tol)})")
    if residual <= tol:
        print("identity holds")
        return ExitCode.OK
    print("identity residual exceeds tolerance")
    return ExitCode.FAILURE


def _cmd_bound(args: argparse.Namespace) -> ExitCode:
    thm = args.thm
    if thm == "hh":
        return _cmd_bound_hh(args)
    if thm in _NEEDS_Q and args.q is None:
        raise DomainError(f"--q is required for {thm}")
    if args.x is None:
        raise DomainError(f"--x is required for {thm}")
    if thm in _FRACTIONAL:
        if args.alpha is None:
            raise DomainError(f"--alpha is required for {thm}")
        alpha = args.alpha
    else:
        if args.alpha is not None and args.alpha != 1.0:
            raise DomainError(f"{thm} is the alpha = 1 case; omit --alpha or pass 1")
        alpha = 1.0
    f = parse_function(args.f)
    f, a, note = _shrink_for_derivative(f, args.a)
    if note:
        print(note)
    inst = ProblemInstance(f, a, args.b, args.x, alpha, args.s, p=args.p, q=args.q)
    if thm in _FRACTIONAL:
        report = _FRACTIONAL[thm](inst, DEFAULT_CONFIG, args.samples, args.seed)
    else:
        report = bound_classical(
            TheoremId(thm.upper()), inst, DEFAULT_CONFIG, args.samples, args.seed
        )
    if thm in _CONVENTION_NOTES:
        print(_CONVENTION_NOTES[thm])
    print(f"lhs = {_g12(report.lhs)} (quadrature error est {_g12(report.quad_error_est)})")
    print(f"rhs = {_g12(report.rhs)}")
    print(f"margin = {_g12(report.margin)}")
    print(f"ratio = {_g12(report.ratio)}")
    _print_certification(report)
    if report.lhs <= report.rhs + BOUND_SLACK * (1.0 + abs(report.rhs)):
        print("bound holds")
        return ExitCode.OK
    print("bound VIOLATED")
    return ExitCode.FAILURE


def _cmd_bound_hh(args: argparse.Namespace) -> ExitCode:
    ignored = [
        name
        for name, val in (("--x", args.x), ("--alpha", args.alpha), ("--q", args.q), ("--p", args.p))
        if val is not None
    ]
    if ignored:
        print(f"note: {', '.join(ignored)} not used by hh")
    f = parse_function(args.f)
    cert = certify_pointwise(
        f.evaluate, args.a, args.b, args.s, "convex", args.samples, args.seed
    )
    (left, mid, right), err = hh_sandwich_with_error(
        f, args.a, args.b, args.s, DEFAULT_CONFIG
    )
    print(f"left (scaled midpoint value) = {_g12(left)}")
    print(f"mid (mean integral) = {_g12(mid)} (quadrature error est {_g12(err)})")
    print(f"right (endpoint average) = {_g12(right)}")
    print(f"slack left = {_g12(mid - left)}")
    print(f"slack right = {_g12(right - mid)}")
    if cert.verdict:
        print(f"hypothesis certified: yes ({cert.samples} samples, seed {cert.seed})")
    else:
        x, y, lam = cert.witness
        print(
            "hypothesis certified: NO "
            f"(worst violation {_g12(cert.worst_violation)} at "
            f"x={_g12(x)}, y={_g12(y)}, lam={_g12(lam)}); "
            "the sandwich is not asserted for this function"
        )
    band = BOUND_SLACK * (1.0 + abs(right))
    if mid >= left - band and mid <= right + band:
        print("sandwich holds")
        return ExitCode.OK
    print("sandwich VIOLATED")
    return ExitCode.FAILURE


def _cmd_certify(args: argparse.Namespace) -> ExitCode:
    f = parse_function(args.f)
    report = certify_pointwise(
        f.evaluate, f.lo, f.hi, args.s, args.mode, args.samples, args.seed
    )
    x, y, lam = report.witness
    kind = f"s-{args.mode}" if args.s != 1.0 else args.mode
    print(f"function: {f.render()}")
    print(
        f"checked {kind} with s = {_g12(args.s)} on "
        f"{report.samples} triples (seed {report.seed})"
    )
    print(f"worst violation = {_g12(report.worst_violation)} (tolerance {_g12(report.tol)})")
    print(f"worst triple: x={_g12(x)}, y={_g12(y)}, lam={_g12(lam)}")
    if report.verdict:
        print("certified")
        return ExitCode.OK
    print("NOT certified")
    return ExitCode.FAILURE


def _cmd_sweep(args: argparse.Namespace) -> ExitCode:
    if args.config is None:
        text = standard_config_text()
    else:
        with open(args.config) as fh:
            text = fh.read()
    grid, notes = apply_derivative_shrink(grid_from_config_text(text))
    for note in notes:
        print(note)
    records = run_sweep(grid, DEFAULT_CONFIG, seed=0)
    write_csv(records, args.out)
    print(f"wrote {len(records)} records to {args.out}")
    summary = summarize(records)
    if args.summary:
        print(format_summary(summary))
    else:
        print(
            f"certified = {summary.certified}  errors = {summary.errors}  "
            f"violations = {summary.violations}"
        )
    if args.svg is not None:
        with open(args.svg, "w") as fh:
            fh.write(render_svg(records))
        print(f"wrote scatter to {args.svg}")
    return ExitCode.FAILURE if summary.violations else ExitCode.OK


def _add_model_args(p: argparse.ArgumentParser, interval: bool = True) -> None:
    p.add_argument(
        "--f",
        required=True,
        metavar="SPEC",
        help="function, e.g. '1*(u-0)^2 on [0,1]'",
    )
    if interval:
        p.add_argument("--a", type=float, required=True, help="interval left endpoint")
        p.add_argument("--b", type=float, required=True, help="interval right endpoint")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fracineq",
        description="verify endpoint-average inequalities for fractional integrals",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    identity = sub.add_parser(
        "identity", help="check the weighted endpoint identity at one point"
    )
    _add_model_args(identity)
    identity.add_argument("--x", type=float, required=True, help="interior point")
    identity.add_argument("--alpha", type=float, required=True, help="integral order")
    identity.add_argument(
        "--tol",
        type=float,
        default=1e-8,
        help="relative residual tolerance (default 1e-8)",
    )
    identity.set_defaults(func=_cmd_identity)

    bound = sub.add_parser("bound", help="evaluate one bound and verify lhs <= rhs")
    bound.add_argument(
        "--thm",
        required=True,
        choices=["t21", "t22", "t23", "t24", "c13", "c14", "c15", "c16", "hh"],
        help="bound id (t2x fractional, c1x their alpha = 1 forms, hh the sandwich)",
    )
    _add_model_args(bound)
    bound.add_argument("--x", type=float, help="interior point (t2x, c1x)")
    bound.add_argument("--alpha", type=float, help="integral order (t2x)")
    bound.add_argument("--s", type=float, required=True, help="convexity order in (0, 1]")
    bound.add_argument("--q", type=float, help="power-mean exponent (t22..t24, c14..c16)")
    bound.add_argument("--p", type=float, help="conjugate of q (derived when omitted)")
    bound.add_argument(
        "--samples",
        type=int,
        default=CERT_SAMPLES,
        help=f"certifier sample count (default {CERT_SAMPLES})",
    )
    bound.add_argument("--seed", type=int, default=0, help="certifier seed (default 0)")
    bound.set_defaults(func=_cmd_bound)

    certify = sub.add_parser(
        "certify", help="sample-certify s-convexity or s-concavity of f"
    )
    _add_model_args(certify, interval=False)
    certify.add_argument("--s", type=float, required=True, help="convexity order in (0, 1]")
    certify.add_argument(
        "--mode", required=True, choices=["convex", "concave"], help="which side to check"
    )
    certify.add_argument(
        "--samples",
        type=int,
        default=CERT_SAMPLES,
        help=f"sample count (default {CERT_SAMPLES})",
    )
    certify.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    certify.set_defaults(func=_cmd_certify)

    sweep = sub.add_parser("sweep", help="run a verification sweep and write a CSV")
    sweep.add_argument(
        "--config",
        help="sweep config file (omit for the shipped default grid)",
    )
    sweep.add_argument("--out", required=True, help="output CSV path")
    sweep.add_argument(
        "--summary", action="store_true", help="print per-bound tightness summary"
    )
    sweep.add_argument("--svg", help="also write a ratio-vs-alpha scatter SVG here")
    sweep.set_defaults(func=_cmd_sweep)

    return parser


def main(argv: list[str] | None = None) -> int:
    """Entry point; returns the exit code instead of raising SystemExit."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return int(ExitCode.OK) if code in (0, None) else int(code)
    try:
        return int(args.func(args))
    except (ParseError, DomainError, DerivativeSingularityError, CsvSchemaError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return int(ExitCode.USAGE)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return int(ExitCode.USAGE)
    except QuadratureToleranceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return int(ExitCode.QUADRATURE)


if __name__ == "__main__":
    raise SystemExit(main())
