#!/usr/bin/env python3
"""Compare the asymptotic radius choice with the per-instance optimum.

For each prime the surgery uses k = 1 handle.  The asymptotic choice is
only defined once its collar width d is positive, which needs very large p.
"""

import argparse
import sys

from sysw import base_surface, optimize_parameters, paper_parameters
from sysw.errors import InfeasibleError
from sysw.surgery import plan_from_radii

PRIMES = [101, 1009, 10007, 100003, 1000003, 10000019, 100000007, 1000000007, 10000000019]


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--lambda", dest="lam", default="1", help="gap constant (default 1)")
    ap.add_argument("--theta", default="21/40")
    ap.add_argument("--k", type=int, default=1)
    ap.add_argument("primes", nargs="*", type=int, default=PRIMES)
    args = ap.parse_args()

    print(f"{'p':>12} {'d (asymptotic)':>15} {'bound (asymptotic)':>19} {'bound (optimum)':>16}")
    for p in args.primes:
        base = base_surface(p)
        pp = paper_parameters(p, 1, args.lam, args.theta)
        best = optimize_parameters(base, args.k).bound.lo_float()
        fixed = "infeasible"
        if pp.feasible:
            try:
                fixed = f"{plan_from_radii(base, args.k, pp.r, pp.d).bound.lo_float():.6f}"
            except InfeasibleError:
                fixed = "too many handles"
        print(f"{p:>12} {pp.d.mid_float():>15.6f} {fixed:>19} {best:>16.6f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
