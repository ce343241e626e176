#!/usr/bin/env python3
"""Worst certified ratio bound / log g in each prime block [g_p, g_p').

Example:
    python3 scripts/ratio_trend.py --pmax 47 --csv trend.csv
"""

import argparse
import csv
import sys

from sysw import Config, asymptotic_constant, audit_range
from sysw.congruence import genus_of
from sysw.primes import next_prime, primes_up_to


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--pmax", type=int, default=23, help="last block starts at the largest prime <= pmax")
    ap.add_argument("--nu", type=int, default=1)
    ap.add_argument("--jobs", type=int, default=None)
    ap.add_argument("--csv", help="write p, g_p, g_next, argmin_genus, min_ratio_lo")
    args = ap.parse_args()

    config = Config(nu=args.nu) if args.jobs is None else Config(nu=args.nu, jobs=args.jobs)
    out = []
    for p in primes_up_to(args.pmax)[1:]:
        q = next_prime(p)
        lo, hi = genus_of(p, args.nu), genus_of(q, args.nu) - 1
        rep = audit_range(lo, hi, args.nu, config)
        row = rep.argmin_row
        out.append((p, lo, hi + 1, row.genus, row.ratio.lo_float()))
        print(f"p={p:>4} genera [{lo}, {hi}]  min ratio {row.ratio.lo_float():.5f} at g={row.genus}",
              flush=True)
    print(f"asymptotic constant (1 - theta)/3 = {asymptotic_constant(config.theta)}"
          f" = {float(asymptotic_constant(config.theta)):.6f}")
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["p", "g_p", "g_next", "argmin_genus", "min_ratio_lo"])
            w.writerows(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
