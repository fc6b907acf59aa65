"""Command-line front end: ``drinfeld <command> [flags]``.

Every command prints one report (JSON by default) and exits with 0 when all
checks pass, 1 when a check fails or a precondition is violated, and 2 on a
usage error.
"""

from __future__ import annotations

import argparse
import math
import sys
import time

from . import __version__
from .envelope import AlgebraError, LieAlgebraSpec
from .expr import ParseError, format_tensor, parse_poly
from .report import Check, Report

__all__ = ["main", "parse_algebra", "block_size"]

DEFAULT_MAX_BLOCK = 250_000


class UsageError(Exception):
    pass


def parse_algebra(text: str, cutoff: int) -> LieAlgebraSpec:
    """``free:N``, ``borel`` or ``abelian:N``; the free kind is truncated at ``cutoff``."""
    kind, _, arg = text.partition(":")
    try:
        if kind == "borel" and not arg:
            return LieAlgebraSpec.borel()
        if kind in ("free", "abelian") and arg.isdigit() and int(arg) >= 1:
            n = int(arg)
            return LieAlgebraSpec.free(n, cutoff) if kind == "free" else LieAlgebraSpec.abelian(n)
    except AlgebraError as exc:
        raise UsageError(str(exc)) from None
    raise UsageError(f"unknown algebra {text!r}; expected free:N, borel or abelian:N")


def block_size(alg: LieAlgebraSpec, arity: int, degree: int) -> int:
    """Number of tensor monomials of the given arity and total degree."""
    n = alg.ngens
    if alg.is_free:
        return math.comb(degree + arity - 1, arity - 1) * n**degree if arity else int(degree == 0)
    # PBW monomials: multisets of size ``degree`` from ``n * arity`` slots
    return math.comb(degree + n * arity - 1, degree) if arity else int(degree == 0)


def _guard(alg: LieAlgebraSpec, arity: int, degree: int, limit: int) -> None:
    size = block_size(alg, arity, degree)
    if size > limit:
        raise AlgebraError(
            f"block of arity {arity} and degree {degree} has {size} monomials, above --max-block {limit}"
        )


def _params(args, **extra) -> dict:
    out = {"algebra": args.algebra}
    out.update(extra)
    return out


def cmd_verify_dgla(args, alg: LieAlgebraSpec) -> Report:
    from .complex import verify_dgla

    _guard(alg, args.max_arity + 2, args.cutoff, args.max_block)
    checks = verify_dgla(alg, args.max_arity, args.cutoff, jacobi=True)
    return Report("verify-dgla", _params(args, cutoff=args.cutoff, max_arity=args.max_arity), checks)


def cmd_cohomology(args, alg: LieAlgebraSpec) -> Report:
    from .hkr import verify_hkr

    _guard(alg, args.max_arity + 2, args.cutoff, args.max_block)
    checks, table = verify_hkr(alg, args.max_arity, args.cutoff)
    totals: dict[int, int] = {}
    for row in table:
        totals[row["degree"]] = totals.get(row["degree"], 0) + row["dim"]
    witnesses = {"table": table, "total_by_degree": {str(k): v for k, v in sorted(totals.items())}}
    return Report("cohomology", _params(args, cutoff=args.cutoff, max_arity=args.max_arity), checks, witnesses)


def cmd_obstruction(args, alg: LieAlgebraSpec) -> Report:
    if args.check_2d_vanishing is not None:
        from .patterns import verify_2d_vanishing

        if alg.label() != "borel":
            raise UsageError("--check-2d-vanishing applies to --algebra borel only")
        checks, witnesses = verify_2d_vanishing(args.check_2d_vanishing)
        return Report("obstruction", _params(args, check_2d_vanishing=args.check_2d_vanishing), checks, witnesses)
    from .obstruction import run_obstruction

    if not alg.is_free:
        raise UsageError("the obstruction cocycle is built for free algebras; use --check-2d-vanishing for borel")
    _guard(alg, 2, args.cutoff, args.max_block)
    checks, witnesses = run_obstruction(alg, args.cutoff)
    return Report("obstruction", _params(args, cutoff=args.cutoff), checks, witnesses)


def cmd_quantize(args, alg: LieAlgebraSpec) -> Report:
    from .exterior import is_triangular, lie_basis
    from .twist import MAX_ORDER, build_T_and_check, solve_structure_maps, twist_mc

    if not 1 <= args.order <= MAX_ORDER:
        raise UsageError(f"--order must lie in 1..{MAX_ORDER}")
    try:
        r = parse_poly(lie_basis(alg), args.r)
    except ParseError as exc:
        raise UsageError(f"cannot parse --r: {exc}") from None
    if not is_triangular(r):
        raise AlgebraError("r is not triangular")
    _guard(alg, 3, args.order, args.max_block)
    maps = solve_structure_maps(alg, args.order)
    rho = twist_mc(r, maps, args.order)
    checks, witnesses = build_T_and_check(rho)
    witnesses["rho"] = [format_tensor(rho[m]) for m in range(1, args.order + 1)]
    return Report("quantize", _params(args, r=args.r, order=args.order), checks, witnesses)


COMMANDS = {
    "verify-dgla": cmd_verify_dgla,
    "cohomology": cmd_cohomology,
    "obstruction": cmd_obstruction,
    "quantize": cmd_quantize,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="drinfeld", description="Exact checks on the Drinfeld DGLA of a Lie algebra.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--algebra", required=True, help="free:N, borel or abelian:N")
    common.add_argument("--cutoff", type=int, default=3, help="word-length / degree cutoff (default 3)")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--timing", action="store_true", help="include wall times (breaks byte-determinism)")
    common.add_argument(
        "--max-block",
        type=int,
        default=DEFAULT_MAX_BLOCK,
        help=f"refuse to build a tensor block with more monomials than this (default {DEFAULT_MAX_BLOCK})",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify-dgla", parents=[common], help="delta^2 = 0, inner derivation, antisymmetry, Jacobi")
    p.add_argument("--max-arity", type=int, default=2)
    p = sub.add_parser("cohomology", parents=[common], help="HKR maps and blockwise cohomology")
    p.add_argument("--max-arity", type=int, default=2)
    p = sub.add_parser("obstruction", parents=[common], help="first obstruction to formality")
    p.add_argument("--check-2d-vanishing", type=int, metavar="N", default=None)
    p = sub.add_parser("quantize", parents=[common], help="twist quantization of a triangular r-matrix")
    p.add_argument("--r", required=True, help='r-matrix, e.g. "e1^e2"')
    p.add_argument("--order", type=int, default=2)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    for flag in ("cutoff", "max_arity", "max_block"):
        if getattr(args, flag, 1) < 1 and not (flag == "max_arity" and args.max_arity == 0):
            print(f"drinfeld: error: --{flag.replace('_', '-')} must be positive", file=sys.stderr)
            return 2
    start = time.perf_counter()
    try:
        alg = parse_algebra(args.algebra, args.cutoff)
        report = COMMANDS[args.command](args, alg)
    except UsageError as exc:
        print(f"drinfeld: error: {exc}", file=sys.stderr)
        return 2
    except AlgebraError as exc:
        report = Report(args.command, _params(args), [Check("precondition", False, {"error": str(exc)})])
        report.elapsed_ms = (time.perf_counter() - start) * 1000.0
        _emit(report, args)
        print(f"drinfeld: error: {exc}", file=sys.stderr)
        return 1
    report.elapsed_ms = (time.perf_counter() - start) * 1000.0
    _emit(report, args)
    return 0 if report.passed else 1


def _emit(report: Report, args) -> None:
    if args.format == "text":
        print(report.to_text())
    else:
        print(report.to_json(args.timing))


if __name__ == "__main__":
    sys.exit(main())
