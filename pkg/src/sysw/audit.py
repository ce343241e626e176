"""Best witness per genus, range audits and the asymptotic constant.

A genus ``g`` is written ``g = g_p + k`` for one of the largest admissible odd
primes ``p``; each candidate is screened with a float estimate and the
leaders are certified.  Range audits split the genus interval into
contiguous chunks, evaluate them independently and merge in genus order, so
the output does not depend on the number of workers.
"""

from __future__ import annotations

import csv
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import IO

import gmpy2
from mpmath import libmp as lm

from .config import Config
from .congruence import base_surface, genus_of, smallest_base_genus
from .errors import DomainError, NoWitnessError
from .hyperbolic import systole_upper_bound
from .interval import Interval, as_interval, format_directed, log
from .primes import is_prime
from .surgery import SurgeryPlan, base_plan, estimate_bound, optimize_parameters

SCREEN_TOL = 1e-7
CSV_DIGITS = 17
CSV_COLUMNS = ["genus", "p", "k", "r_lo", "d_lo", "bound_lo", "log_g_hi", "ratio_lo"]


def asymptotic_constant(theta) -> Fraction:
    """The growth coefficient ``(1 - theta) / 3``; ``19/120`` at ``theta = 21/40``."""
    theta = Fraction(theta)
    if not 0 < theta < 1:
        raise DomainError(f"theta must lie in (0, 1), got {theta}")
    return (1 - theta) / 3


@dataclass(frozen=True)
class Witness:
    genus: int
    plan: SurgeryPlan
    ratio: Interval
    candidates_considered: tuple[int, ...]


def candidate_primes(g: int, nu: int, window: int) -> list[int]:
    """The ``window`` largest odd primes ``p`` with ``g_p <= g``, descending."""
    top = int(gmpy2.iroot(gmpy2.mpz(max(g // nu, 1)), 3)[0]) + 1
    while top >= 3 and genus_of(top, nu) > g:
        top -= 1
    out = []
    c = top
    while c >= 3 and len(out) < window:
        if c % 2 and is_prime(c):
            out.append(c)
        c -= 1
    return out


def _plan_for(p: int, g: int, nu: int, prec: int) -> SurgeryPlan:
    base = base_surface(p, nu, prec)
    k = g - base.genus
    return base_plan(base) if k == 0 else optimize_parameters(base, k)


def find_witness(g: int, nu: int = 1, config: Config | None = None) -> Witness:
    config = config or Config(nu=nu)
    threshold = smallest_base_genus(nu)
    if g < threshold:
        raise NoWitnessError(g, threshold)
    prec = config.precision_bits
    cands = candidate_primes(g, nu, config.candidate_window)
    est = {}
    for p in cands:
        base = base_surface(p, nu, prec)
        est[p] = estimate_bound(base, g - base.genus)
    top = max(est.values())
    best = None
    for p in sorted(cands, key=lambda q: (-est[q], -q)):
        if est[p] < top - SCREEN_TOL:
            break
        plan = _plan_for(p, g, nu, prec)
        if best is None or lm.mpf_gt(plan.bound.lo, best.bound.lo):
            best = plan
    upper = systole_upper_bound(g, prec)
    if lm.mpf_gt(best.bound.lo, upper.hi):
        raise AssertionError(f"certified floor exceeds the systole upper bound at genus {g}")
    ratio = best.bound / log(as_interval(g, prec))
    return Witness(g, best, ratio, tuple(cands))


@dataclass(frozen=True)
class AuditRow:
    genus: int
    p: int
    k: int
    r_lo: tuple | None
    d_lo: tuple | None
    bound_lo: tuple
    log_g_hi: tuple
    ratio: Interval

    @classmethod
    def from_witness(cls, w: Witness) -> "AuditRow":
        pl = w.plan
        lg = log(as_interval(w.genus, pl.bound.prec))
        return cls(
            w.genus,
            pl.base.p,
            pl.k,
            pl.r.lo if pl.r is not None else None,
            pl.d.lo if pl.d is not None else None,
            pl.bound.lo,
            lg.hi,
            w.ratio,
        )

    def csv_fields(self) -> list:
        def down(v):
            return "" if v is None else format_directed(v, CSV_DIGITS, upward=False)

        return [
            self.genus,
            self.p,
            self.k,
            down(self.r_lo),
            down(self.d_lo),
            down(self.bound_lo),
            format_directed(self.log_g_hi, CSV_DIGITS, upward=True),
            down(self.ratio.lo),
        ]


@dataclass(frozen=True)
class AuditReport:
    g_min: int
    g_max: int
    nu: int
    theta: Fraction
    rows: tuple[AuditRow, ...]
    failures: tuple[int, ...]

    @property
    def argmin_row(self) -> AuditRow | None:
        best = None
        for row in self.rows:
            if best is None or lm.mpf_lt(row.ratio.lo, best.ratio.lo):
                best = row
        return best

    @property
    def min_ratio(self) -> Interval | None:
        row = self.argmin_row
        return None if row is None else row.ratio

    def write_csv(self, fh: IO[str]) -> None:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for row in self.rows:
            w.writerow(row.csv_fields())

    def write_plot_csv(self, fh: IO[str]) -> None:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["genus", "ratio_lo"])
        for row in self.rows:
            w.writerow([row.genus, format_directed(row.ratio.lo, CSV_DIGITS, upward=False)])

    def summary(self) -> dict:
        row = self.argmin_row
        out = {
            "range": [self.g_min, self.g_max],
            "nu": self.nu,
            "theta": str(self.theta),
            "asymptotic_constant": str(asymptotic_constant(self.theta)),
            "witnessed": len(self.rows),
            "failures": list(self.failures),
            "min_ratio": None,
        }
        if row is not None:
            out["min_ratio"] = {
                "genus": row.genus,
                "lo": format_directed(row.ratio.lo, CSV_DIGITS, upward=False),
                "hi": format_directed(row.ratio.hi, CSV_DIGITS, upward=True),
            }
        return out

    def write_json(self, fh: IO[str]) -> None:
        json.dump(self.summary(), fh, indent=2)
        fh.write("\n")


def _audit_chunk(args) -> tuple[list[AuditRow], list[int]]:
    lo, hi, config = args
    rows, failures = [], []
    for g in range(lo, hi + 1):
        try:
            w = find_witness(g, config.nu, config)
        except NoWitnessError:
            failures.append(g)
            continue
        rows.append(AuditRow.from_witness(w))
    return rows, failures


def _chunks(g_min: int, g_max: int, n: int) -> list[tuple[int, int]]:
    total = g_max - g_min + 1
    n = max(1, min(n, total))
    step = -(-total // n)
    return [(a, min(a + step - 1, g_max)) for a in range(g_min, g_max + 1, step)]


def audit_range(g_min: int, g_max: int, nu: int = 1, config: Config | None = None) -> AuditReport:
    """Witness every genus in ``[g_min, g_max]``."""
    if g_min > g_max:
        raise DomainError(f"empty range [{g_min}, {g_max}]")
    config = replace(config, nu=nu) if config else Config(nu=nu)
    jobs = config.jobs
    tasks = [(a, b, config) for a, b in _chunks(g_min, g_max, jobs * 4 if jobs > 1 else 1)]
    if jobs == 1:
        parts = [_audit_chunk(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_audit_chunk, tasks))
    rows, failures = [], []
    for r, f in parts:
        rows.extend(r)
        failures.extend(f)
    return AuditReport(g_min, g_max, nu, config.theta, tuple(rows), tuple(failures))
