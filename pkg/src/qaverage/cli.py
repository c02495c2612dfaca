"""Command-line entry point: ``qaverage verify | verify-all | expand | period | recognize``."""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from fractions import Fraction
from typing import Optional, Sequence

import mpmath
from mpmath import mp

from .arith import DEFAULT_PREC, decimal_digits
from .curve import CurveModel
from .eisenstein import (
    HeckeIndex,
    Twist,
    alpha_expansion,
    cusp0_expansion,
    gk_expansion,
    hk_expansion,
)
from .errors import QAverageError
from .periods import period_lattice, real_period_agm, real_period_quad
from .recognize import recognize_rational
from .verify import (
    MAX_HEIGHT,
    TABLE,
    Summary,
    VerificationReport,
    run_all,
    select_samples,
    table_checksum,
    table_row,
    verify_instance,
)

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2


class UsageError(QAverageError):
    pass


REPORT_FIELDS = (
    "N", "k", "t", "case", "R", "recognized", "expected", "match",
    "residual", "precision", "wall_time", "status", "detail",
)


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _prec(text: str) -> int:
    p = int(text)
    if p < 64:
        raise argparse.ArgumentTypeError("--prec-bits must be at least 64")
    return p


def format_reports(reports: Sequence[VerificationReport], fmt: str) -> str:
    rows = [r.to_dict() for r in reports]
    if fmt == "json":
        return json.dumps(rows, indent=2)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=REPORT_FIELDS, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        return buf.getvalue().rstrip("\n")
    lines = [f"table checksum {table_checksum()}"]
    for d in rows:
        lines.append(
            f"N={d['N']:<3} k={d['k']:<2} t={d['t']:<8} case={d['case'] or '-'}  "
            f"expected={d['expected']:<10} recognized={d['recognized'] or '-':<10} "
            f"residual={d['residual'] or '-':<10} {d['status']}  ({d['wall_time']:.2f}s)"
            + (f"  {d['detail']}" if d["detail"] else "")
        )
    return "\n".join(lines)


def _exit_code(reports: Sequence[VerificationReport]) -> int:
    return Summary(list(reports), [], 0).exit_code


def cmd_verify(args) -> int:
    table_row(args.N, args.k)  # DomainError for rows not in the table
    if args.param is not None:
        params = [args.param]
    else:
        params = select_samples(args.N, args.k, args.samples).params
    reports = [verify_instance(args.N, args.k, t, args.prec_bits) for t in params]
    if args.format != "text":
        print(f"table checksum {table_checksum()}", file=sys.stderr)
    print(format_reports(reports, args.format))
    return _exit_code(reports)


def cmd_verify_all(args) -> int:
    summary = run_all(args.prec_bits, args.samples, jobs=args.jobs)
    for sel in summary.selections:
        if sel.scanned:
            logging.info("N=%d k=%d: scanned %d parameters for a case-B sample (%s)",
                         sel.N, sel.k, sel.scanned, sel.case_b_param)
    if args.format != "text":
        print(f"table checksum {summary.checksum}", file=sys.stderr)
    print(format_reports(summary.reports, args.format))
    if args.format == "text":
        rows = summary.rows_passed()
        print(f"{sum(rows.values())}/{len(TABLE)} rows pass" if rows else "no samples")
    return summary.exit_code


def cmd_expand(args) -> int:
    if args.series == "gk":
        exp = gk_expansion(args.N, args.k, args.terms)
    elif args.series == "hk":
        exp = hk_expansion(args.N, args.k, args.terms)
    elif args.series == "alpha":
        if args.a is None or args.b is None:
            raise UsageError("--series alpha needs --a and --b")
        exp = alpha_expansion(HeckeIndex(args.N, args.a, args.b), args.terms)
    else:
        if args.ell is None:
            raise UsageError("--series cusp0 needs --ell")
        exp = cusp0_expansion(args.N, args.ell, args.twist, args.terms)
    print("\n".join(exp.dump_lines()))
    return EXIT_OK


def cmd_period(args) -> int:
    E = CurveModel(args.a1, args.a2, args.a3, args.a4, args.a6)
    P = args.prec_bits
    pd = period_lattice(E, P)
    digits = decimal_digits(P)
    with mp.workprec(P):
        gap = abs(real_period_agm(E, P) - real_period_quad(E, P)) / pd.omega_plus
        out = {
            "curve": [str(a) for a in E.ainvs],
            "omega_plus": mpmath.nstr(pd.omega_plus, digits),
            "omega_minus": mpmath.nstr(pd.omega_minus, digits),
            "tau": [mpmath.nstr(pd.tau.real, digits), mpmath.nstr(pd.tau.imag, digits)],
            "q": mpmath.nstr(pd.q, digits),
            "components": pd.components,
            "agm_quad_relative_gap": mpmath.nstr(gap, 6),
            "precision": P,
        }
    print(json.dumps(out, indent=2))
    return EXIT_OK


def cmd_recognize(args) -> int:
    digits = len(args.value.replace("-", "").replace(".", "").lstrip("0")) or 1
    prec = max(64, int(digits * 3.33) + 16)
    with mp.workprec(prec):
        x = mp.mpf(args.value)
        rec = recognize_rational(x, args.max_height, args.tol, prec=prec)
    if rec is None:
        print(json.dumps({"value": None}))
        return EXIT_MISMATCH
    print(json.dumps({
        "value": f"{rec.value.numerator}/{rec.value.denominator}",
        "residual": f"{float(rec.residual):.6e}",
        "height": rec.height,
    }))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qaverage", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_prec(p):
        p.add_argument("--prec-bits", type=_prec, default=DEFAULT_PREC, help="working precision in bits")

    def add_format(p):
        p.add_argument("--format", choices=("json", "csv", "text"), default="text")

    p = sub.add_parser("verify", help="check one table row on family samples")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--param", type=_rational, help="a single family parameter")
    p.add_argument("--samples", type=int, default=3)
    add_prec(p)
    add_format(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("verify-all", help="check every table row")
    p.add_argument("--samples", type=int, default=3, help="samples per row")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    add_prec(p)
    add_format(p)
    p.set_defaults(func=cmd_verify_all)

    p = sub.add_parser("expand", help="dump exact q-expansion coefficients")
    p.add_argument("--series", choices=("gk", "hk", "alpha", "cusp0"), required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--a", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--ell", type=int)
    p.add_argument("--twist", choices=[t.value for t in Twist], default=Twist.PLAIN.value)
    p.add_argument("--terms", type=int, default=20, help="largest exponent numerator n")
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("period", help="real period and normalized lattice of a curve")
    for name in ("a1", "a2", "a3", "a4", "a6"):
        p.add_argument(f"--{name}", type=_rational, default=Fraction(0))
    add_prec(p)
    p.set_defaults(func=cmd_period)

    p = sub.add_parser("recognize", help="recognize a decimal as a rational of bounded height")
    p.add_argument("--value", required=True)
    p.add_argument("--max-height", type=int, default=MAX_HEIGHT)
    p.add_argument("--tol", required=True, type=_rational)
    p.set_defaults(func=cmd_recognize)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except (QAverageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
