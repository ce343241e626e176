"""Abstract congruence surfaces: genus and systole floor as functions of p.

A base surface for the odd prime ``p`` has genus ``(p**3 - p) * nu + 1`` and
systole at least ``4 log p``.  The existence of such a family for a given
``nu`` is taken as an axiom; everything computed from it here is certified.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import DomainError
from .hyperbolic import systole_upper_bound
from .interval import Interval, as_interval, certainly_le, log, power, scale2
from .primes import is_prime


def genus_of(p: int, nu: int = 1) -> int:
    return (p**3 - p) * nu + 1


def smallest_base_genus(nu: int = 1) -> int:
    return genus_of(3, nu)


@dataclass(frozen=True)
class BaseSurface:
    p: int
    nu: int
    genus: int
    sys_floor: Interval

    @property
    def log_p(self) -> Interval:
        """``log p``, i.e. a quarter of the systole floor."""
        return scale2(self.sys_floor, -2)


def _check_nu(nu: int) -> int:
    if isinstance(nu, bool) or not isinstance(nu, int) or nu < 1:
        raise DomainError(f"nu must be a positive integer, got {nu!r}")
    return nu


@lru_cache(maxsize=4096)
def base_surface(p: int, nu: int = 1, prec: int | None = None) -> BaseSurface:
    _check_nu(nu)
    if p == 2 or not is_prime(p):
        raise DomainError(f"p must be an odd prime, got {p}")
    floor = scale2(log(as_interval(p, prec)), 2)
    return BaseSurface(p, nu, genus_of(p, nu), floor)


def four_thirds_floor(b: BaseSurface) -> Interval:
    """Enclosure of ``(4/3) log(genus)``."""
    lg = log(as_interval(b.genus, b.sys_floor.prec))
    return scale2(lg, 2) / 3


def respects_upper_bound(b: BaseSurface) -> bool:
    """Certainly ``4 log p <= 2 log(4 g_p - 2)``."""
    return certainly_le(b.sys_floor, systole_upper_bound(b.genus, b.sys_floor.prec))


def exact_genus_gap(p: int, p_next: int, nu: int = 1) -> int:
    """``g_{p'} - g_p + 1`` in exact integers."""
    return genus_of(p_next, nu) - genus_of(p, nu) + 1


def genus_gap_bound(p: int, nu: int, lam: Interval, theta, prec: int | None = None) -> Interval:
    """Enclosure of ``8 nu lam**3 p**(2 + theta) + 1``.

    Dominates ``g_{p'} - g_p + 1`` whenever ``p' - p <= lam p**theta`` and
    ``lam >= 1``.
    """
    theta = Fraction(theta)
    if not 0 < theta < 1:
        raise DomainError(f"theta must lie in (0, 1), got {theta}")
    lam = as_interval(lam, prec)
    pp = power(as_interval(p, lam.prec), 2 + theta)
    return 8 * nu * power(lam, 3) * pp + 1
