"""Command-line interface: ``python -m sysw <command> ...``.

Exit codes: 0 success / accept, 1 no witness / reject / uncovered genera,
2 usage error or malformed certificate.
"""

from __future__ import annotations

import argparse
import sys
from contextlib import contextmanager
from fractions import Fraction

from .audit import asymptotic_constant, audit_range, find_witness
from .certificate import CHECK_DOCS, emit_certificate, verify_certificate
from .config import DEFAULT_GAP_PMAX, Config
from .errors import DomainError, NoWitnessError, ParseError
from .interval import format_directed
from .primes import build_gap_table
from .surgery import paper_parameters

DIGITS = 17


def _checks_epilog() -> str:
    lines = ["certified checks:"]
    for name, text in CHECK_DOCS.items():
        lines.append(f"  {name:<13} {text}")
    lines.append("")
    lines.append("coverage of a prime block uses (g_p - 1) / (2 sinh(r+d)^2) >= g_p' - g_p + 1,")
    lines.append("and the genus gap obeys g_p' - g_p + 1 <= 8 nu lambda^3 p^(2+theta) + 1.")
    return "\n".join(lines)


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("configuration")
    g.add_argument("--nu", type=int, default=1, help="genus multiplier of the base family (default 1)")
    g.add_argument("--theta", type=_rational, default=Fraction(21, 40),
                   help="prime gap exponent, rational (default 21/40)")
    g.add_argument("--lambda-mode", choices=("empirical", "assumed"), default=None,
                   help="gap constant source (default empirical; assumed if --lambda is given)")
    g.add_argument("--lambda", dest="lam", default=None,
                   help="gap constant for assumed mode, decimal >= 1")
    g.add_argument("--precision", type=int, default=None,
                   help="working precision in bits (default 128, or $SYSW_PRECISION)")
    g.add_argument("--window", type=int, default=5,
                   help="number of largest admissible primes tried per genus (default 5)")
    g.add_argument("--jobs", type=int, default=None, help="worker processes for audits (default: cores)")
    g.add_argument("--gap-pmax", type=int, default=DEFAULT_GAP_PMAX,
                   help=f"sieve range for the empirical gap constant (default {DEFAULT_GAP_PMAX})")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    fmt = argparse.RawDescriptionHelpFormatter
    parser = argparse.ArgumentParser(
        prog="sysw",
        description="Certified witnesses for logarithmic systolic growth in every genus.",
        epilog=_checks_epilog(),
        formatter_class=fmt,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    w = sub.add_parser("witness", parents=[common], help="best witness for one genus",
                       epilog=_checks_epilog(), formatter_class=fmt)
    w.add_argument("--genus", type=int, required=True)
    w.add_argument("--emit", metavar="FILE", help="write a .sysw.json certificate ('-' for stdout)")

    a = sub.add_parser("audit", parents=[common], help="witness every genus in a range",
                       epilog=_checks_epilog(), formatter_class=fmt)
    a.add_argument("--from", dest="g_from", type=int, required=True)
    a.add_argument("--to", dest="g_to", type=int, required=True)
    a.add_argument("--csv", metavar="FILE", help="per-genus rows")
    a.add_argument("--json", metavar="FILE", help="summary with min ratio and failures")
    a.add_argument("--plot", metavar="FILE", help="genus vs ratio_lo, for external plotting")

    gp = sub.add_parser("gaps", parents=[common], help="prime gap table and empirical lambda")
    gp.add_argument("--pmax", type=int, required=True)
    gp.add_argument("--csv", metavar="FILE", help="write p, p_next, gap, ratio_lo, ratio_hi")

    v = sub.add_parser("verify", help="re-verify a certificate independently",
                       epilog=_checks_epilog(), formatter_class=fmt)
    v.add_argument("file")

    pp = sub.add_parser("paper-params", parents=[common],
                        help="the asymptotic choice r = arcsinh((2/pi) log p), d at the coverage limit")
    pp.add_argument("--p", type=int, required=True)

    sub.add_parser("constant", parents=[common], help="print (1 - theta)/3 exactly")
    return parser


def config_from_args(args) -> Config:
    mode = args.lambda_mode or ("assumed" if args.lam is not None else "empirical")
    extra = {}
    if args.precision is not None:
        extra = {"precision_bits": args.precision, "precision_source": "flag"}
    if args.jobs is not None:
        extra["jobs"] = args.jobs
    return Config(
        nu=args.nu,
        theta=args.theta,
        lambda_mode=mode,
        lambda_value=args.lam,
        candidate_window=args.window,
        gap_pmax=args.gap_pmax,
        **extra,
    )


@contextmanager
def _out(path: str):
    if path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _fmt(iv) -> str:
    return f"[{format_directed(iv.lo, DIGITS, False)}, {format_directed(iv.hi, DIGITS, True)}]"


def cmd_witness(args, config: Config) -> int:
    try:
        w = find_witness(args.genus, config.nu, config)
    except NoWitnessError as exc:
        print(f"no witness: {exc}", file=sys.stderr)
        return 1
    plan = w.plan
    print(f"genus={w.genus} p={plan.base.p} k={plan.k} nu={config.nu}")
    if plan.k:
        print(f"r={_fmt(plan.r)} d={_fmt(plan.d)} s={_fmt(plan.s)} packing_N={plan.packing_N}")
    print(f"bound={_fmt(plan.bound)} (bound ~ {plan.bound.lo_float():.6f})")
    print(f"ratio={_fmt(w.ratio)} candidates={','.join(map(str, w.candidates_considered))}")
    if args.emit:
        cert = emit_certificate(w, config)
        with _out(args.emit) as fh:
            fh.write(cert.dumps())
    return 0


def cmd_audit(args, config: Config) -> int:
    rep = audit_range(args.g_from, args.g_to, config.nu, config)
    if args.csv:
        with _out(args.csv) as fh:
            rep.write_csv(fh)
    if args.json:
        with _out(args.json) as fh:
            rep.write_json(fh)
    if args.plot:
        with _out(args.plot) as fh:
            rep.write_plot_csv(fh)
    summary = rep.summary()
    mr = summary["min_ratio"]
    print(f"range=[{args.g_from}, {args.g_to}] witnessed={summary['witnessed']} "
          f"failures={len(rep.failures)}")
    if mr:
        print(f"min_ratio=[{mr['lo']}, {mr['hi']}] at genus {mr['genus']} "
              f"(asymptotic constant {summary['asymptotic_constant']})")
    return 1 if rep.failures else 0


def cmd_gaps(args, config: Config) -> int:
    table = build_gap_table(args.pmax, config.theta, config.precision_bits)
    print(f"pmax={args.pmax} theta={config.theta} pairs={len(table.entries)}")
    print(f"lambda_emp={_fmt(table.lambda_emp)} at p={table.argmax_p}")
    if args.csv:
        with _out(args.csv) as fh:
            table.write_csv(fh)
    return 0


def cmd_verify(args) -> int:
    try:
        with open(args.file) as fh:
            text = fh.read()
        verdict = verify_certificate(text)
    except (OSError, ParseError) as exc:
        print(f"malformed: {exc}", file=sys.stderr)
        return 2
    if verdict.accepted:
        print(f"ACCEPT {args.file}: {verdict.message}")
        return 0
    print(f"REJECT {args.file}: check '{verdict.failed_check}' failed: {verdict.message}")
    return 1


def cmd_paper_params(args, config: Config) -> int:
    lam = config.lambda_interval()
    pp = paper_parameters(args.p, config.nu, lam, config.theta, config.precision_bits)
    print(f"p={args.p} nu={config.nu} theta={config.theta} lambda={_fmt(lam)} ({config.lambda_mode})")
    print(f"r={_fmt(pp.r)}")
    print(f"C(lambda)={_fmt(pp.c_lambda)}")
    print(f"d={_fmt(pp.d)}")
    print("feasible" if pp.feasible else "infeasible (d is not positive)")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "verify":
        return cmd_verify(args)
    try:
        config = config_from_args(args)
    except (DomainError, ParseError) as exc:
        parser.error(str(exc))
    if args.command == "constant":
        print(asymptotic_constant(config.theta))
        return 0
    handlers = {
        "witness": cmd_witness,
        "audit": cmd_audit,
        "gaps": cmd_gaps,
        "paper-params": cmd_paper_params,
    }
    try:
        return handlers[args.command](args, config)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
