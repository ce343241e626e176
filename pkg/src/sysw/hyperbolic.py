"""Closed-form hyperbolic plane and surface formulas, in interval arithmetic.

Radii may be given as an :class:`~sysw.interval.Interval` or as an exact
number; genera are plain integers.
"""

from __future__ import annotations

from .errors import DomainError
from .interval import Interval, as_interval, log, pi, scale2, sinh, square
from mpmath import libmp as lm


def _radius(r, prec: int | None) -> Interval:
    r = as_interval(r, prec)
    if lm.mpf_lt(r.lo, lm.fzero):
        raise DomainError(f"negative radius {r!r}")
    return r


def _genus(g: int, minimum: int) -> int:
    if isinstance(g, bool) or not isinstance(g, int):
        raise TypeError(f"genus must be an integer, got {type(g).__name__}")
    if g < minimum:
        raise DomainError(f"genus must be at least {minimum}, got {g}")
    return g


def disk_area(r, prec: int | None = None) -> Interval:
    """Area ``4 pi sinh(r/2)**2`` of a hyperbolic disk of radius ``r``."""
    r = _radius(r, prec)
    return scale2(pi(r.prec) * square(sinh(scale2(r, -1))), 2)


def disk_perimeter(r, prec: int | None = None) -> Interval:
    """Length ``2 pi sinh(r)`` of the boundary circle of a disk of radius ``r``."""
    r = _radius(r, prec)
    return scale2(pi(r.prec) * sinh(r), 1)


def surface_area(g: int, prec: int | None = None) -> Interval:
    """Area ``4 pi (g - 1)`` of a closed hyperbolic surface of genus ``g``."""
    g = _genus(g, 1)
    p = as_interval(0, prec).prec
    return scale2(pi(p) * (g - 1), 2)


def systole_upper_bound(g: int, prec: int | None = None) -> Interval:
    """Universal upper bound ``2 log(4g - 2)`` on the systole in genus ``g``."""
    g = _genus(g, 2)
    return scale2(log(as_interval(4 * g - 2, prec)), 1)


def sinh_squared(s, prec: int | None = None) -> Interval:
    return square(sinh(_radius(s, prec)))
