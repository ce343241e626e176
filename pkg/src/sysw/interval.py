"""Outward-rounded interval arithmetic on arbitrary-precision binary endpoints.

Endpoints are raw mpmath ``mpf`` tuples ``(sign, man, exp, bc)``; every value
they represent is an exact dyadic rational.  Field operations (add, sub, mul,
div, sqrt) use mpmath's correctly rounded directed modes.  Transcendental
endpoints are computed with guard bits, rounded in the outward direction and
then pushed one further ulp outward, so that the enclosure does not depend on
the last-bit accuracy of the underlying series evaluation.

All functions are pure; an :class:`Interval` carries the working precision
that operations on it default to.
"""

from __future__ import annotations

import enum
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Union

import gmpy2
from mpmath import libmp as lm

from .errors import DomainError, ParseError

DEFAULT_PRECISION = 128
MAX_PRECISION = 4096
PRECISION_ENV = "SYSW_PRECISION"
GUARD_BITS = 24

Number = Union[int, float, Fraction, str, "Interval"]

_ZERO = lm.fzero
_ONE = lm.fone


def default_precision() -> int:
    """Working precision, honouring the ``SYSW_PRECISION`` override."""
    raw = os.environ.get(PRECISION_ENV)
    if raw is None:
        return DEFAULT_PRECISION
    try:
        bits = int(raw)
    except ValueError as exc:
        raise ParseError(f"{PRECISION_ENV}={raw!r} is not an integer") from exc
    if not 2 <= bits <= MAX_PRECISION:
        raise DomainError(f"{PRECISION_ENV} must lie in [2, {MAX_PRECISION}]")
    return bits


class Ordering(enum.Enum):
    CERTAINLY_LT = "certainly_lt"
    CERTAINLY_GE = "certainly_ge"
    UNDECIDED = "undecided"


# -- raw endpoint helpers ---------------------------------------------------


def _ulp(v: tuple, prec: int) -> tuple:
    """One unit in the last place of ``v`` at ``prec`` bits (``v`` nonzero)."""
    _, man, exp, bc = v
    return lm.from_man_exp(1, exp + bc - prec)


def _push_down(v: tuple, prec: int) -> tuple:
    if v == _ZERO:
        return lm.from_man_exp(-1, -prec * 4)
    return lm.mpf_sub(v, _ulp(v, prec), prec, "f")


def _push_up(v: tuple, prec: int) -> tuple:
    if v == _ZERO:
        return lm.from_man_exp(1, -prec * 4)
    return lm.mpf_add(v, _ulp(v, prec), prec, "c")


def _transcendental(fn, x: tuple, prec: int, upward: bool) -> tuple:
    rnd = "c" if upward else "f"
    v = lm.mpf_pos(fn(x, prec + GUARD_BITS, rnd), prec, rnd)
    return _push_up(v, prec) if upward else _push_down(v, prec)


def exact_decimal(v: tuple) -> str:
    """Exact decimal expansion of a finite dyadic endpoint."""
    if v in (lm.finf, lm.fninf, lm.fnan):
        raise DomainError("non-finite endpoint has no decimal expansion")
    sign, man, exp, _ = v
    if man == 0:
        return "0"
    if exp >= 0:
        digits = str(man << exp)
    else:
        scaled = str(man * 5 ** (-exp))
        places = -exp
        if len(scaled) <= places:
            scaled = "0" * (places - len(scaled) + 1) + scaled
        digits = scaled[:-places] + "." + scaled[-places:]
        digits = digits.rstrip("0").rstrip(".")
    return ("-" if sign else "") + digits


def dyadic_from_fraction(q: Fraction) -> tuple | None:
    """Exact endpoint for ``q`` when its denominator is a power of two."""
    den = q.denominator
    if den & (den - 1):
        return None
    return lm.from_man_exp(q.numerator, -(den.bit_length() - 1))


def to_fraction(v: tuple) -> Fraction:
    sign, man, exp, _ = v
    m = -man if sign else man
    return Fraction(m << exp) if exp >= 0 else Fraction(m, 1 << -exp)


# -- the interval type ------------------------------------------------------


@dataclass(frozen=True)
class Interval:
    lo: tuple
    hi: tuple
    prec: int = field(default=DEFAULT_PRECISION, compare=False)

    def __post_init__(self):
        if self.lo == lm.fnan or self.hi == lm.fnan:
            raise DomainError("NaN endpoint")
        if lm.mpf_gt(self.lo, self.hi):
            raise DomainError(f"empty interval [{self.lo}, {self.hi}]")

    # construction
    @classmethod
    def point(cls, x, prec: int | None = None) -> "Interval":
        """Degenerate interval on an exactly representable value."""
        prec = prec or default_precision()
        if isinstance(x, tuple):
            v = x
        elif isinstance(x, bool):
            raise TypeError("bool is not a number here")
        elif isinstance(x, int):
            v = lm.from_int(x)
        elif isinstance(x, float):
            v = lm.from_float(x)
        else:
            raise TypeError(f"cannot build an exact point from {type(x).__name__}")
        return cls(v, v, prec)

    @classmethod
    def hull(cls, a: "Interval", b: "Interval") -> "Interval":
        lo = a.lo if lm.mpf_le(a.lo, b.lo) else b.lo
        hi = a.hi if lm.mpf_ge(a.hi, b.hi) else b.hi
        return cls(lo, hi, max(a.prec, b.prec))

    def with_prec(self, prec: int) -> "Interval":
        return Interval(self.lo, self.hi, prec)

    # inspection
    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    def width(self) -> Fraction:
        return to_fraction(self.hi) - to_fraction(self.lo)

    def lo_float(self) -> float:
        return lm.to_float(self.lo, rnd="f")

    def hi_float(self) -> float:
        return lm.to_float(self.hi, rnd="c")

    def mid_float(self) -> float:
        return lm.to_float(lm.mpf_shift(lm.mpf_add(self.lo, self.hi), -1))

    def lo_fraction(self) -> Fraction:
        return to_fraction(self.lo)

    def hi_fraction(self) -> Fraction:
        return to_fraction(self.hi)

    def contains(self, x) -> bool:
        """Exact membership test for a number or a sub-interval."""
        if isinstance(x, Interval):
            return lm.mpf_le(self.lo, x.lo) and lm.mpf_le(x.hi, self.hi)
        q = Fraction(x) if not isinstance(x, Fraction) else x
        return to_fraction(self.lo) <= q <= to_fraction(self.hi)

    def __contains__(self, x) -> bool:
        return self.contains(x)

    def __repr__(self) -> str:
        return (
            f"Interval([{lm.to_str(self.lo, 20)}, {lm.to_str(self.hi, 20)}], "
            f"prec={self.prec})"
        )

    # arithmetic
    def __neg__(self) -> "Interval":
        return Interval(lm.mpf_neg(self.hi), lm.mpf_neg(self.lo), self.prec)

    def __add__(self, other):
        return iv_arith("add", self, other)

    def __radd__(self, other):
        return iv_arith("add", other, self)

    def __sub__(self, other):
        return iv_arith("sub", self, other)

    def __rsub__(self, other):
        return iv_arith("sub", other, self)

    def __mul__(self, other):
        return iv_arith("mul", self, other)

    def __rmul__(self, other):
        return iv_arith("mul", other, self)

    def __truediv__(self, other):
        return iv_arith("div", self, other)

    def __rtruediv__(self, other):
        return iv_arith("div", other, self)


def as_interval(x: Number, prec: int | None = None) -> Interval:
    """Coerce ``x`` to an interval, exactly where possible, else outward."""
    if isinstance(x, Interval):
        return x if prec is None else x.with_prec(prec)
    prec = prec or default_precision()
    if isinstance(x, (int, float)) and not isinstance(x, bool):
        return Interval.point(x, prec)
    if isinstance(x, Fraction):
        return iv_from_rational(x, prec)
    if isinstance(x, str):
        return iv_from_decimal(x, prec)
    raise TypeError(f"cannot convert {type(x).__name__} to Interval")


def iv_from_rational(q: Fraction, prec: int | None = None) -> Interval:
    prec = prec or default_precision()
    exact = dyadic_from_fraction(q)
    if exact is not None and exact[3] <= prec:
        return Interval(exact, exact, prec)
    lo = lm.from_rational(q.numerator, q.denominator, prec, "f")
    hi = lm.from_rational(q.numerator, q.denominator, prec, "c")
    return Interval(lo, hi, prec)


def iv_from_decimal(text: str, prec: int | None = None) -> Interval:
    """Tightest ``prec``-bit enclosure of a signed decimal literal."""
    try:
        q = Fraction(text.strip())
    except (ValueError, ZeroDivisionError, AttributeError) as exc:
        raise ParseError(f"not a decimal number: {text!r}") from exc
    if "/" in text:
        raise ParseError(f"not a decimal number: {text!r}")
    return iv_from_rational(q, prec)


# -- arithmetic -------------------------------------------------------------


def _prec_of(*xs: Interval) -> int:
    return max(x.prec for x in xs)


def iv_arith(kind: str, a: Number, b: Number, prec: int | None = None) -> Interval:
    if not isinstance(a, Interval):
        a = as_interval(a, b.prec if isinstance(b, Interval) else prec)
    if not isinstance(b, Interval):
        b = as_interval(b, a.prec)
    p = prec or _prec_of(a, b)
    if kind == "add":
        return Interval(lm.mpf_add(a.lo, b.lo, p, "f"), lm.mpf_add(a.hi, b.hi, p, "c"), p)
    if kind == "sub":
        return Interval(lm.mpf_sub(a.lo, b.hi, p, "f"), lm.mpf_sub(a.hi, b.lo, p, "c"), p)
    if kind == "mul":
        pairs = [(a.lo, b.lo), (a.lo, b.hi), (a.hi, b.lo), (a.hi, b.hi)]
        los = [lm.mpf_mul(x, y, p, "f") for x, y in pairs]
        his = [lm.mpf_mul(x, y, p, "c") for x, y in pairs]
        return Interval(_min(los), _max(his), p)
    if kind == "div":
        if lm.mpf_le(b.lo, _ZERO) and lm.mpf_ge(b.hi, _ZERO):
            raise DomainError("division by an interval containing zero")
        pairs = [(a.lo, b.lo), (a.lo, b.hi), (a.hi, b.lo), (a.hi, b.hi)]
        los = [lm.mpf_div(x, y, p, "f") for x, y in pairs]
        his = [lm.mpf_div(x, y, p, "c") for x, y in pairs]
        return Interval(_min(los), _max(his), p)
    raise ValueError(f"unknown arithmetic kind {kind!r}")


def _min(vs):
    out = vs[0]
    for v in vs[1:]:
        if lm.mpf_lt(v, out):
            out = v
    return out


def _max(vs):
    out = vs[0]
    for v in vs[1:]:
        if lm.mpf_gt(v, out):
            out = v
    return out


def iv_min(*xs: Interval) -> Interval:
    """Enclosure of the pointwise minimum."""
    return Interval(_min([x.lo for x in xs]), _min([x.hi for x in xs]), _prec_of(*xs))


def iv_max(*xs: Interval) -> Interval:
    return Interval(_max([x.lo for x in xs]), _max([x.hi for x in xs]), _prec_of(*xs))


def sqrt(a: Interval, prec: int | None = None) -> Interval:
    p = prec or a.prec
    if lm.mpf_lt(a.lo, _ZERO):
        raise DomainError("sqrt of an interval reaching below zero")
    return Interval(lm.mpf_sqrt(a.lo, p, "f"), lm.mpf_sqrt(a.hi, p, "c"), p)


def square(a: Interval, prec: int | None = None) -> Interval:
    return _pow_int(a, 2, prec or a.prec)


def scale2(a: Interval, n: int) -> Interval:
    """Exact multiplication by ``2**n``."""
    return Interval(lm.mpf_shift(a.lo, n), lm.mpf_shift(a.hi, n), a.prec)


# -- transcendental functions ----------------------------------------------


@lru_cache(maxsize=None)
def pi(prec: int | None = None) -> Interval:
    """Enclosure of pi at ``prec`` bits, regenerated per precision."""
    p = prec or default_precision()
    lo = _push_down(lm.mpf_pi(p + GUARD_BITS, "f"), p)
    hi = _push_up(lm.mpf_pi(p + GUARD_BITS, "c"), p)
    return Interval(lm.mpf_pos(lo, p, "f"), lm.mpf_pos(hi, p, "c"), p)


def _monotone(fn, a: Interval, p: int, fixed: dict) -> Interval:
    """Increasing ``fn`` evaluated at both endpoints, outward."""

    def end(x, upward):
        if x in fixed:
            return fixed[x]
        return _transcendental(fn, x, p, upward)

    return Interval(end(a.lo, False), end(a.hi, True), p)


def sinh(a: Interval, prec: int | None = None) -> Interval:
    return _monotone(lm.mpf_sinh, a, prec or a.prec, {_ZERO: _ZERO})


def arcsinh(a: Interval, prec: int | None = None) -> Interval:
    return _monotone(lm.mpf_asinh, a, prec or a.prec, {_ZERO: _ZERO})


def exp(a: Interval, prec: int | None = None) -> Interval:
    return _monotone(lm.mpf_exp, a, prec or a.prec, {_ZERO: _ONE})


def log(a: Interval, prec: int | None = None) -> Interval:
    if lm.mpf_le(a.lo, _ZERO):
        raise DomainError("log of an interval reaching zero or below")
    return _monotone(lm.mpf_log, a, prec or a.prec, {_ONE: _ZERO})


def _pow_int(a: Interval, n: int, p: int) -> Interval:
    if n == 0:
        return Interval(_ONE, _ONE, p)
    if n < 0:
        return iv_arith("div", Interval(_ONE, _ONE, p), _pow_int(a, -n, p), p)

    def up(x):
        return lm.mpf_pow_int(x, n, p, "c")

    def down(x):
        return lm.mpf_pow_int(x, n, p, "f")

    if n % 2 == 1 or lm.mpf_ge(a.lo, _ZERO):
        return Interval(down(a.lo), up(a.hi), p)
    if lm.mpf_le(a.hi, _ZERO):
        return Interval(down(a.hi), up(a.lo), p)
    top = up(a.lo) if lm.mpf_gt(lm.mpf_abs(a.lo), a.hi) else up(a.hi)
    return Interval(_ZERO, top, p)


def power(a: Interval, exponent: Union[int, Fraction], prec: int | None = None) -> Interval:
    """``a ** exponent`` for a rational exponent.

    Integer exponents use exact directed powers and accept any sign of ``a``;
    other exponents require ``a.lo > 0`` and go through ``exp(q log a)``.
    """
    p = prec or a.prec
    q = Fraction(exponent)
    if q.denominator == 1:
        return _pow_int(a, int(q), p)
    if lm.mpf_le(a.lo, _ZERO):
        raise DomainError("non-integer power of an interval reaching zero or below")
    if a.is_point and a.lo[2] >= 0 and abs(q.numerator) <= 512:
        n = a.lo[1] << a.lo[2]
        if q > 0:
            return _int_root_power(n, q, p)
        return iv_arith("div", Interval(_ONE, _ONE, p), _int_root_power(n, -q, p), p)
    qi = iv_from_rational(q, p + GUARD_BITS)
    # monotone in the base for fixed q, so evaluate per endpoint
    at_lo = exp(log(Interval(a.lo, a.lo, p + GUARD_BITS)) * qi)
    at_hi = exp(log(Interval(a.hi, a.hi, p + GUARD_BITS)) * qi)
    env = iv_min(at_lo, at_hi), iv_max(at_lo, at_hi)
    lo = lm.mpf_pos(env[0].lo, p, "f")
    hi = lm.mpf_pos(env[1].hi, p, "c")
    return Interval(lo, hi, p)


def _int_root_power(n: int, q: Fraction, p: int) -> Interval:
    """``n ** q`` for a positive integer ``n`` and ``q > 0`` via integer roots."""
    a, b = q.numerator, q.denominator
    magnitude = (a * (n.bit_length() - 1)) // b
    shift = max(0, p + 4 - magnitude)
    root, exact = gmpy2.iroot(gmpy2.mpz(n) ** a << (b * shift), b)
    root = int(root)
    lo = lm.from_man_exp(root, -shift, p, "f")
    hi = lm.from_man_exp(root if exact else root + 1, -shift, p, "c")
    return Interval(lo, hi, p)


_FNS: dict[str, Callable[..., Interval]] = {
    "sinh": sinh,
    "arcsinh": arcsinh,
    "log": log,
    "exp": exp,
}


def iv_fn(kind: str, a: Interval, exponent=None, prec: int | None = None) -> Interval:
    """Dispatch to one of the monotone functions by name."""
    if kind == "pow":
        if exponent is None:
            raise ValueError("pow needs an exponent")
        return power(a, exponent, prec)
    if exponent is not None:
        raise ValueError(f"{kind} takes no exponent")
    try:
        fn = _FNS[kind]
    except KeyError:
        raise ValueError(f"unknown function kind {kind!r}") from None
    return fn(a, prec)


# -- comparison -------------------------------------------------------------


def iv_compare(a: Interval, b: Interval) -> Ordering:
    if lm.mpf_lt(a.hi, b.lo):
        return Ordering.CERTAINLY_LT
    if lm.mpf_ge(a.lo, b.hi):
        return Ordering.CERTAINLY_GE
    return Ordering.UNDECIDED


def certainly_le(a: Interval, b: Interval) -> bool:
    return lm.mpf_le(a.hi, b.lo)


def certainly_lt(a: Interval, b: Interval) -> bool:
    return lm.mpf_lt(a.hi, b.lo)


def compare_escalating(
    build: Callable[[int], tuple[Interval, Interval]],
    prec: int | None = None,
    cap: int = MAX_PRECISION,
) -> tuple[Ordering, int]:
    """Compare ``build(prec)``, doubling precision while undecided.

    Returns the ordering and the precision at which it was decided (or the
    cap, if it never was).
    """
    p = prec or default_precision()
    while True:
        a, b = build(p)
        verdict = iv_compare(a, b)
        if verdict is not Ordering.UNDECIDED or p >= cap:
            return verdict, p
        p = min(2 * p, cap)


# -- directed decimal formatting -------------------------------------------


def format_directed(v: tuple, digits: int, upward: bool) -> str:
    """Round an endpoint to ``digits`` significant decimals, outward."""
    from decimal import ROUND_CEILING, ROUND_FLOOR, Context, Decimal

    ctx = Context(prec=digits, rounding=ROUND_CEILING if upward else ROUND_FLOOR)
    d = ctx.plus(Decimal(exact_decimal(v)))
    return format(d, "f") if abs(d.adjusted()) < 20 else format(d, "E")
