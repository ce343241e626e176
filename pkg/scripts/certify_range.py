#!/usr/bin/env python3
"""Emit a certificate for every genus in a range and re-verify each one.

Example:
    python3 scripts/certify_range.py 25 500 --out certs/
"""

import argparse
import sys
from pathlib import Path

from sysw import Config, emit_certificate, find_witness, verify_certificate
from sysw.certificate import EXTENSION


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("g_from", type=int)
    ap.add_argument("g_to", type=int)
    ap.add_argument("--out", type=Path, help="directory for the .sysw.json files")
    ap.add_argument("--nu", type=int, default=1)
    args = ap.parse_args()

    config = Config(nu=args.nu, jobs=1)
    if args.out:
        args.out.mkdir(parents=True, exist_ok=True)
    rejected = []
    for g in range(args.g_from, args.g_to + 1):
        text = emit_certificate(find_witness(g, args.nu, config), config).dumps()
        if args.out:
            (args.out / f"genus_{g}{EXTENSION}").write_text(text)
        v = verify_certificate(text)
        if not v.accepted:
            rejected.append(g)
            print(f"genus {g}: REJECT ({v.failed_check}) {v.message}", file=sys.stderr)
    total = args.g_to - args.g_from + 1
    print(f"{total - len(rejected)}/{total} certificates verified")
    return 1 if rejected else 0


if __name__ == "__main__":
    sys.exit(main())
