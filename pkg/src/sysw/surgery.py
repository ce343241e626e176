"""Handle surgery on a base surface and the choice of its radii.

Removing ``2k`` disks of radius ``r`` around points of a maximal packing by
disks of radius ``s = r + d`` and gluing the boundary circles in pairs gives a
surface of genus ``g_p + k`` whose systole is at least
``min(sys_base, 2 pi sinh r, 2 d)``.  The constraints are

* ``s < log p`` (a quarter of the systole floor ``4 log p``), and
* ``2k <= N`` where ``N >= (g_p - 1) / sinh(s)**2`` counts the packing.

:func:`optimize_parameters` maximizes the floor per instance;
:func:`paper_parameters` reproduces the asymptotic choice
``2 pi sinh r = 4 log p`` with ``r + d`` at the coverage limit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from mpmath import libmp as lm

from .checks import Check, check
from .congruence import BaseSurface, exact_genus_gap, genus_of
from .errors import DomainError, InfeasibleError
from .hyperbolic import disk_perimeter, sinh_squared
from .interval import (
    MAX_PRECISION,
    Interval,
    arcsinh,
    as_interval,
    certainly_le,
    iv_from_rational,
    iv_min,
    log,
    pi,
    power,
    scale2,
)
from .primes import is_prime

SEPARATION_MARGIN = Fraction(1, 10**9)
BISECTION_TOL = 1e-9


@dataclass(frozen=True)
class SurgeryPlan:
    base: BaseSurface
    k: int
    r: Interval | None
    d: Interval | None
    s: Interval | None
    packing_N: int
    bound: Interval

    @property
    def resulting_genus(self) -> int:
        return self.base.genus + self.k


def base_plan(base: BaseSurface) -> SurgeryPlan:
    """The genus is a base genus: no surgery, the systole floor stands."""
    return SurgeryPlan(base, 0, None, None, None, 0, base.sys_floor)


# -- packing ---------------------------------------------------------------


def packing_value(g: int, s: Interval) -> Interval:
    """Enclosure of ``(g - 1) / sinh(s)**2``."""
    return (g - 1) / sinh_squared(s)


def packing_lower_bound(g: int, s, prec: int | None = None, cap: int = MAX_PRECISION) -> int:
    """Certified lower bound on the size of a maximal ``s``-disk packing.

    For an exact ``s`` the precision is raised until the enclosure no longer
    straddles an integer, so the result is ``floor((g - 1) / sinh(s)**2)``.
    """
    if g < 2:
        raise DomainError(f"genus must be at least 2, got {g}")
    s = as_interval(s, prec)
    if lm.mpf_le(s.lo, lm.fzero):
        raise DomainError("packing radius must be positive")
    p = s.prec
    while True:
        v = packing_value(g, s.with_prec(p))
        n_lo = int(lm.to_int(v.lo, "f"))
        if not s.is_point or n_lo == lm.to_int(v.hi, "f") or p >= cap:
            return max(n_lo, 0)
        p = min(2 * p, cap)


def surgery_systole_floor(sys_base: Interval, r, d) -> Interval:
    """Enclosure of ``min(sys_base, 2 pi sinh r, 2 d)``."""
    r = as_interval(r, sys_base.prec)
    d = as_interval(d, sys_base.prec)
    if lm.mpf_lt(d.lo, lm.fzero):
        raise DomainError("collar width must be nonnegative")
    return iv_min(sys_base, disk_perimeter(r), scale2(d, 1))


def coverage_inequality(p: int, p_next: int, nu: int, s, prec: int | None = None) -> Check:
    """Whether one radius ``s`` reaches every genus from ``g_p`` to ``g_{p'}``.

    Checks ``(g_p - 1) / (2 sinh(s)**2) >= g_{p'} - g_p + 1``.
    """
    if p_next < p:
        raise DomainError("p_next must not precede p")
    s = as_interval(s, prec)
    gp = genus_of(p, nu)
    rhs = as_interval(exact_genus_gap(p, p_next, nu), s.prec)
    prec_now = s.prec
    while True:
        lhs = scale2(packing_value(gp, s.with_prec(prec_now)), -1)
        c = check("coverage", lhs, ">=", rhs)
        if c.verdict or not s.is_point or prec_now >= MAX_PRECISION:
            return c
        prec_now = min(2 * prec_now, MAX_PRECISION)


# -- plans from explicit radii ----------------------------------------------


def plan_from_radii(base: BaseSurface, k: int, r, d) -> SurgeryPlan:
    """Certify the constraints for given radii and assemble the plan."""
    if k < 1:
        raise DomainError("surgery needs k >= 1")
    prec = base.sys_floor.prec
    r = as_interval(r, prec)
    d = as_interval(d, prec)
    if not (lm.mpf_gt(r.lo, lm.fzero) and lm.mpf_gt(d.lo, lm.fzero)):
        raise InfeasibleError(f"radii must be positive: r={r!r}, d={d!r}")
    s = r + d
    if not certainly_le(s + iv_from_rational(SEPARATION_MARGIN, prec), base.log_p):
        raise InfeasibleError(f"s={s!r} is not certainly below log {base.p} - margin")
    n = packing_lower_bound(base.genus, s)
    if 2 * k > n:
        raise InfeasibleError(f"2k = {2 * k} exceeds the certified packing count {n}")
    bound = surgery_systole_floor(base.sys_floor, r, d)
    return SurgeryPlan(base, k, r, d, s, n, bound)


# -- per-instance optimum ----------------------------------------------------


def balance_radius(s: float, tol: float = BISECTION_TOL) -> float:
    """Root of ``pi sinh r = s - r`` on ``[0, s]``, by bisection."""
    lo, hi = 0.0, s
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if math.pi * math.sinh(mid) < s - mid:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def radius_cap(p: int, genus: int, k: int) -> float:
    """Float estimate of ``s_max = min(log p - margin, arcsinh sqrt((g_p-1)/2k))``."""
    sep = math.log(p) - float(SEPARATION_MARGIN)
    pack = math.asinh(math.sqrt((genus - 1) / (2 * k)))
    return min(sep, pack)


def _target_radii(p: int, genus: int, k: int, backoff: float) -> tuple[float, float]:
    s = radius_cap(p, genus, k) * (1.0 - backoff)
    r = balance_radius(s)
    return r, s - r


def estimate_bound(base: BaseSurface, k: int) -> float:
    """Uncertified float estimate of the optimized floor, for screening."""
    if k == 0:
        return 4.0 * math.log(base.p)
    r, d = _target_radii(base.p, base.genus, k, 1e-12)
    return min(4.0 * math.log(base.p), 2 * math.pi * math.sinh(r), 2 * d)


def optimize_parameters(base: BaseSurface, k: int) -> SurgeryPlan:
    """Certified plan maximizing ``min(4 log p, 2 pi sinh r, 2 d)``.

    The optimum sits at ``s = s_max`` with ``2 pi sinh r = 2 d``.  The radii
    are backed off slightly from the float optimum so that every constraint
    is certified with room to spare.
    """
    if k < 1:
        raise DomainError("optimize_parameters needs k >= 1; use base_plan for k = 0")
    backoff = 1e-12
    failures = []
    for _ in range(5):
        r, d = _target_radii(base.p, base.genus, k, backoff)
        try:
            return plan_from_radii(base, k, r, d)
        except InfeasibleError as exc:
            failures.append(f"backoff={backoff:g}: {exc}")
        backoff *= 1000
    raise InfeasibleError(
        f"no certified plan for p={base.p}, nu={base.nu}, k={k}: " + "; ".join(failures)
    )


# -- the asymptotic parameter choice ----------------------------------------


@dataclass(frozen=True)
class PaperParameters:
    p: int
    r: Interval
    d: Interval
    c_lambda: Interval
    feasible: bool


def c_lambda(nu: int, lam, theta, prec: int | None = None) -> Interval:
    """``(1/2) log(2 (8 nu lam**3 + 3**(-2-theta)) / ((1 - 3**-2) nu))``."""
    theta = Fraction(theta)
    lam = as_interval(lam, prec)
    p = lam.prec
    inner = 8 * nu * power(lam, 3) + power(as_interval(3, p), -2 - theta)
    denom = iv_from_rational(Fraction(8, 9) * nu, p)
    return scale2(log(scale2(inner, 1) / denom), -1)


def paper_parameters(p: int, nu: int, lam, theta, prec: int | None = None) -> PaperParameters:
    """``r = arcsinh((2/pi) log p)``, ``d = (1-theta)/2 log p - r - C(lam)``.

    Feasible when ``d`` is certainly positive; precision is doubled while the
    sign of ``d`` is undecided.
    """
    if p < 3 or not is_prime(p):
        raise DomainError(f"p must be an odd prime, got {p}")
    theta = Fraction(theta)
    bits = as_interval(lam, prec).prec
    while True:
        lam_p = as_interval(lam, bits) if not isinstance(lam, Interval) else lam.with_prec(bits)
        logp = log(as_interval(p, bits))
        r = arcsinh(scale2(logp, 1) / pi(bits))
        c = c_lambda(nu, lam_p, theta, bits)
        d = iv_from_rational((1 - theta) / 2, bits) * logp - r - c
        if lm.mpf_gt(d.lo, lm.fzero) or lm.mpf_le(d.hi, lm.fzero) or bits >= MAX_PRECISION:
            return PaperParameters(p, r, d, c, lm.mpf_gt(d.lo, lm.fzero))
        bits = min(2 * bits, MAX_PRECISION)
