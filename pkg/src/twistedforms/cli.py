"""Command-line front end for the verification suites.

Usage::

    twistedforms verify algebra [--seed S] [--json]
    twistedforms verify calculus [--order N] [--fd-step H] [--seed S] [--json]
    twistedforms verify maxwell --field {plane-wave,coulomb,constant} [--frame-boost B] [--order N] [--json]
    twistedforms report parity --model {standard,relativistic} [--field NAME] [--frame-boost B ...] [--json]

The exit code is 0 iff every check in the report passes. The environment
variable ``TWISTEDFORMS_QUAD_ORDER`` sets the default quadrature order;
explicit flags take precedence.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Optional, Sequence

from . import suites
from .electromag import BUILTIN_FIELDS
from .orientation import OrientationModel

__all__ = ["build_parser", "run", "main", "ORDER_ENV"]

ORDER_ENV = "TWISTEDFORMS_QUAD_ORDER"


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _boost(text: str) -> float:
    value = float(text)
    if not -1.0 < value < 1.0:
        raise argparse.ArgumentTypeError(f"frame boost must satisfy |beta| < 1, got {text}")
    return value


def _default_order(fallback: int) -> int:
    raw = os.environ.get(ORDER_ENV)
    if raw is None or raw.strip() == "":
        return fallback
    try:
        return _positive_int(raw)
    except (ValueError, argparse.ArgumentTypeError):
        raise SystemExit(f"twistedforms: invalid {ORDER_ENV}={raw!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="twistedforms", description="Verification suites for twisted exterior calculus.")
    top = parser.add_subparsers(dest="command", required=True)

    verify = top.add_parser("verify", help="run a verification suite")
    vsub = verify.add_subparsers(dest="suite", required=True)

    algebra = vsub.add_parser("algebra", help="multilinear invariant suite")
    algebra.add_argument("--seed", type=int, default=suites.DEFAULT_SEED)

    calculus = vsub.add_parser("calculus", help="dd = 0, Stokes and current boundary identity")
    calculus.add_argument("--order", type=_positive_int, default=None)
    calculus.add_argument("--fd-step", type=float, default=None)
    calculus.add_argument("--seed", type=int, default=suites.DEFAULT_SEED)

    maxwell = vsub.add_parser("maxwell", help="4D and 3D residuals and stationary integral laws")
    maxwell.add_argument("--field", choices=("plane-wave", "coulomb", "constant"), required=True)
    maxwell.add_argument("--frame-boost", type=_boost, default=0.0)
    maxwell.add_argument("--order", type=_positive_int, default=None)

    report = top.add_parser("report", help="emit a table")
    rsub = report.add_subparsers(dest="table", required=True)
    parity = rsub.add_parser("parity", help="time-reflection parity table")
    parity.add_argument("--model", choices=[m.value for m in OrientationModel], required=True)
    parity.add_argument("--field", choices=sorted({n.replace("_", "-") for n in BUILTIN_FIELDS} - {"zero"}), default="plane-wave")
    parity.add_argument("--frame-boost", type=_boost, nargs="+", default=[0.0])

    for sub in (algebra, calculus, maxwell, parity):
        sub.add_argument("--json", action="store_true", help="emit the report as JSON")
    return parser


def run(argv: Optional[Sequence[str]] = None) -> suites.Report:
    """Parse ``argv`` and run the selected suite."""
    args = build_parser().parse_args(argv)
    if args.command == "verify" and args.suite == "algebra":
        return suites.algebra_suite(seed=args.seed)
    if args.command == "verify" and args.suite == "calculus":
        order = args.order if args.order is not None else _default_order(8)
        return suites.calculus_suite(order=order, fd_step=args.fd_step, seed=args.seed)
    if args.command == "verify" and args.suite == "maxwell":
        order = args.order if args.order is not None else _default_order(12)
        return suites.maxwell_suite(args.field, beta=args.frame_boost, order=order)
    return suites.parity_suite(OrientationModel(args.model), field=args.field, betas=tuple(args.frame_boost))


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Entry point; returns 0 iff every check passes."""
    try:
        argv = sys.argv[1:] if argv is None else list(argv)
        json_out = "--json" in argv
        report = run(argv)
    except SystemExit as exc:
        if isinstance(exc.code, int):
            return exc.code
        print(exc.code, file=sys.stderr)
        return 2
    print(report.to_json() if json_out else report.render())
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
