"""Prime generation, gap tabulation and the empirical gap constant.

The gap table records every consecutive prime pair ``(p, p')`` with
``p <= p_max`` together with an enclosure of ``(p' - p) / p**theta``.  Its
maximum, ``lambda_emp``, is the unconditional desk-scale substitute for the
asymptotic constant in the prime gap theorem.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import IO

import numpy as np
from mpmath import libmp as lm

from .errors import DomainError
from .interval import Interval, as_interval, format_directed, iv_arith, iv_max, power

SEGMENT = 10**6
MR_LIMIT = 2**64
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _small_sieve(n: int) -> np.ndarray:
    flags = np.ones(n + 1, dtype=bool)
    flags[:2] = False
    for q in range(2, math.isqrt(n) + 1):
        if flags[q]:
            flags[q * q :: q] = False
    return np.flatnonzero(flags)


def primes_up_to(n: int, segment: int = SEGMENT) -> list[int]:
    """All primes ``<= n`` in ascending order, by a segmented sieve."""
    if n < 2:
        return []
    base = _small_sieve(math.isqrt(n))
    out: list[int] = []
    for low in range(2, n + 1, segment):
        high = min(low + segment, n + 1)
        flags = np.ones(high - low, dtype=bool)
        for q in base:
            q = int(q)
            if q * q >= high:
                break
            start = max(q * q, -(-low // q) * q)
            flags[start - low :: q] = False
        out.extend((np.flatnonzero(flags) + low).tolist())
    return out


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for ``n < 2**64``."""
    if n < 2:
        return False
    if n >= MR_LIMIT:
        raise DomainError("primality testing is only supported below 2**64")
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def next_prime(n: int) -> int:
    """Least prime strictly greater than ``n``."""
    if n < 2:
        return 2
    c = n + 1 if n % 2 == 0 else n + 2
    while not is_prime(c):
        c += 2
    return c


@dataclass(frozen=True)
class GapEntry:
    p: int
    p_next: int
    gap: int
    ratio: Interval


@dataclass(frozen=True)
class GapTable:
    p_max: int
    theta: Fraction
    entries: tuple[GapEntry, ...]
    lambda_emp: Interval
    argmax_p: int

    def write_csv(self, fh: IO[str], digits: int = 20) -> None:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["p", "p_next", "gap", "ratio_lo", "ratio_hi"])
        for e in self.entries:
            w.writerow([
                e.p,
                e.p_next,
                e.gap,
                format_directed(e.ratio.lo, digits, upward=False),
                format_directed(e.ratio.hi, digits, upward=True),
            ])


def _check_theta(theta) -> Fraction:
    theta = Fraction(theta)
    if not 0 < theta < 1:
        raise DomainError(f"theta must lie in (0, 1), got {theta}")
    return theta


def gap_ratio(p: int, gap: int, theta: Fraction, prec: int | None = None) -> Interval:
    """Enclosure of ``gap / p**theta``."""
    return iv_arith("div", as_interval(gap, prec), power(as_interval(p, prec), theta))


def build_gap_table(p_max: int, theta=Fraction(21, 40), prec: int | None = None) -> GapTable:
    theta = _check_theta(theta)
    if p_max < 3:
        raise DomainError(f"p_max must be at least 3, got {p_max}")
    ps = primes_up_to(p_max)
    ps.append(next_prime(ps[-1]))
    entries = []
    best = None
    for p, q in zip(ps, ps[1:]):
        e = GapEntry(p, q, q - p, gap_ratio(p, q - p, theta, prec))
        entries.append(e)
        if best is None or lm.mpf_gt(e.ratio.hi, best.ratio.hi):
            best = e
    lam = iv_max(*(e.ratio for e in entries))
    return GapTable(p_max, theta, tuple(entries), lam, best.p)
