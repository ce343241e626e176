from decimal import Decimal
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import libmp as lm

import oracle
from sysw.errors import DomainError
from sysw.hyperbolic import (
    disk_area,
    disk_perimeter,
    sinh_squared,
    surface_area,
    systole_upper_bound,
)
from sysw.interval import Interval, arcsinh, certainly_lt, pi

P = Interval.point


def test_zero_radius_is_exact():
    assert disk_area(0) == P(0)
    assert disk_perimeter(0) == P(0)


@pytest.mark.parametrize("r", [1, 2, Fraction(1, 3), 7.5])
def test_disk_area_against_oracle(r):
    with oracle.hp():
        want = 4 * oracle.pi() * oracle.sinh(oracle.D(Fraction(r)) / 2) ** 2
    assert oracle.inside(disk_area(r), want)


def test_disk_area_rounded_values():
    assert abs(disk_area(1).mid_float() - 3.4122) < 1e-4
    assert abs(disk_area(2).mid_float() - 17.35539) < 1e-5


def test_disk_perimeter_values():
    with oracle.hp():
        want = 2 * oracle.pi() * oracle.sinh(1)
    assert oracle.inside(disk_perimeter(1), want)
    assert abs(disk_perimeter(1).mid_float() - 7.3840) < 1e-4
    # sinh(arcsinh 1) = 1, so the perimeter is 2 pi
    assert disk_perimeter(arcsinh(P(1))).contains(pi() * 2)


def test_negative_radius_rejected():
    with pytest.raises(DomainError):
        disk_area(-0.5)
    with pytest.raises(DomainError):
        disk_perimeter(Interval(P(-1).lo, P(1).lo))


def test_surface_area():
    assert surface_area(1) == P(0)
    assert surface_area(2) == pi() * 4
    assert surface_area(121).contains(pi() * 480)
    with pytest.raises(DomainError):
        surface_area(0)
    with pytest.raises(TypeError):
        surface_area(2.0)


def test_systole_upper_bound():
    with oracle.hp():
        assert oracle.inside(systole_upper_bound(2), 2 * oracle.ln(6))
        assert oracle.inside(systole_upper_bound(121), 2 * oracle.ln(482))
    assert abs(systole_upper_bound(2).mid_float() - 3.5835) < 1e-4
    assert certainly_lt(systole_upper_bound(2), systole_upper_bound(3))
    with pytest.raises(DomainError):
        systole_upper_bound(1)


@pytest.mark.parametrize("r", [0.5, 1.0, 2.0])
def test_derivative_identity(r):
    h = 1e-6
    fd = (disk_area(r + h).mid_float() - disk_area(r - h).mid_float()) / (2 * h)
    per = disk_perimeter(r).mid_float()
    assert abs(fd - per) / per <= 1e-5


radii = st.floats(min_value=1e-4, max_value=20, allow_nan=False)


@settings(max_examples=200)
@given(st.integers(min_value=2, max_value=10**7), radii)
def test_packing_consistency(g, s):
    # surface_area / disk_area(2s) and (g - 1) / sinh(s)**2 are the same number
    a = surface_area(g) / disk_area(2 * s)
    b = (g - 1) / sinh_squared(s)
    assert not (certainly_lt(a, b) or certainly_lt(b, a))
    with oracle.hp():
        exact = (Decimal(g) - 1) / oracle.sinh(s) ** 2
        assert oracle.inside(a, exact) and oracle.inside(b, exact)
    lo_a, hi_a = int(lm.to_int(a.lo, "f")), int(lm.to_int(a.hi, "f"))
    lo_b, hi_b = int(lm.to_int(b.lo, "f")), int(lm.to_int(b.hi, "f"))
    if lo_a == hi_a and lo_b == hi_b:
        assert lo_a == lo_b == int(exact)


@settings(max_examples=100)
@given(radii, st.integers(min_value=2, max_value=10**6))
def test_outputs_nonnegative(r, g):
    for v in (disk_area(r), disk_perimeter(r), sinh_squared(r), surface_area(g), systole_upper_bound(g)):
        assert not lm.mpf_lt(v.lo, lm.fzero)
