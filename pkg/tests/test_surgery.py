import math
import random
from decimal import Decimal
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracle
from sysw.congruence import base_surface
from sysw.errors import DomainError, InfeasibleError
from sysw.hyperbolic import disk_perimeter
from sysw.interval import Interval, arcsinh, as_interval, certainly_le, log, sqrt
from sysw.primes import primes_up_to
from sysw.surgery import (
    SEPARATION_MARGIN,
    balance_radius,
    base_plan,
    c_lambda,
    coverage_inequality,
    optimize_parameters,
    packing_lower_bound,
    paper_parameters,
    plan_from_radii,
    surgery_systole_floor,
)

P = Interval.point
THETA = Fraction(21, 40)
SMALL_ODD = primes_up_to(200)[1:]


def below(iv):
    """Exact dyadic point at the lower endpoint of an enclosure."""
    return P(iv.lo)


# -- packing ---------------------------------------------------------------


def test_packing_at_arcsinh_one():
    assert packing_lower_bound(121, below(arcsinh(P(1)))) == 120
    # an enclosure straddling the exact integer can only certify one less
    assert packing_lower_bound(121, arcsinh(P(1))) == 119


def test_packing_large_radius():
    assert packing_lower_bound(2, 3.0) == 0


def test_packing_exact_rational():
    s = below(arcsinh(sqrt(as_interval(Fraction(24, 190)))))
    assert packing_lower_bound(25, s) == 190


def test_packing_domain():
    with pytest.raises(DomainError):
        packing_lower_bound(25, 0)
    with pytest.raises(DomainError):
        packing_lower_bound(1, 1.0)


@settings(max_examples=100)
@given(st.integers(min_value=2, max_value=10**9), st.floats(min_value=1e-3, max_value=10))
def test_packing_is_exact_floor(g, s):
    with oracle.hp():
        exact = (Decimal(g) - 1) / oracle.sinh(s) ** 2
    assert packing_lower_bound(g, s) == int(exact)


# -- lemma floor ---------------------------------------------------------------


def test_floor_middle_term():
    r = arcsinh(P(2) / oracle_pi_iv())
    out = surgery_systole_floor(P(10), r, 3)
    assert abs(out.mid_float() - 4) < 1e-12


def oracle_pi_iv():
    from sysw.interval import pi
    return pi()


def test_floor_collapses_with_d():
    for d in (1e-3, 1e-6, 1e-9):
        assert surgery_systole_floor(P(10), 1, d).hi_float() <= 2 * d * (1 + 1e-12)


def test_floor_reference_values():
    out = surgery_systole_floor(P(6.4378), P(0.3815), P(1.2279))
    with oracle.hp():
        want = min(Decimal(6.4378), 2 * oracle.pi() * oracle.sinh(0.3815), 2 * Decimal(1.2279))
    assert oracle.inside(out, want)
    assert abs(out.mid_float() - 2.455) < 1e-3


def test_floor_rejects_negative_d():
    with pytest.raises(DomainError):
        surgery_systole_floor(P(1), 1, -0.1)


# -- coverage ----------------------------------------------------------------


def test_coverage_equality_case():
    s = below(arcsinh(sqrt(as_interval(Fraction(24, 194)))))
    assert coverage_inequality(3, 5, 1, s).verdict


def test_coverage_fails_at_log_p():
    assert not coverage_inequality(3, 5, 1, log(P(3))).verdict


@given(st.sampled_from(SMALL_ODD), st.floats(min_value=1e-3, max_value=1.0))
def test_coverage_degenerate_gap(p, s):
    c = coverage_inequality(p, p, 1, s)
    assert c.rhs == P(1)
    # holds whenever (g_p - 1) / (2 sinh^2 s) >= 1
    assert c.verdict == (math.sinh(s) ** 2 * 2 <= p**3 - p)


# -- explicit radii ------------------------------------------------------------


def test_plan_from_radii_rejections():
    b = base_surface(5)
    with pytest.raises(InfeasibleError):
        plan_from_radii(b, 1, 0, 0.5)
    with pytest.raises(InfeasibleError):
        plan_from_radii(b, 1, 1.0, 0.61)  # s > log 5
    with pytest.raises(InfeasibleError):
        plan_from_radii(b, 61, 0.5, 0.5)  # N = 83 < 122
    with pytest.raises(DomainError):
        plan_from_radii(b, 0, 0.5, 0.5)


def test_base_plan():
    b = base_surface(5)
    plan = base_plan(b)
    assert plan.k == 0 and plan.r is None and plan.bound == b.sys_floor
    assert plan.resulting_genus == 121


# -- asymptotic parameter choice --------------------------------------------


def oracle_asymptotic(p, nu=1, lam=1, theta=THETA):
    with oracle.hp():
        lp = oracle.ln(p)
        r = oracle.asinh(2 * lp / oracle.pi())
        inner = 8 * nu * Decimal(lam) ** 3 + oracle.power(3, -2 - theta)
        c = oracle.ln(2 * inner / (Decimal(8) / 9 * nu)) / 2
        d = oracle.D((1 - theta) / 2) * lp - r - c
        return r, c, d


def test_c_lambda_value():
    _, c, _ = oracle_asymptotic(101)
    got = c_lambda(1, 1, THETA)
    assert oracle.inside(got, c)
    assert abs(got.mid_float() - 1.4490) < 1e-3


def test_asymptotic_choice_infeasible_at_101():
    pp = paper_parameters(101, 1, 1, THETA)
    r, c, d = oracle_asymptotic(101)
    assert not pp.feasible
    assert oracle.inside(pp.r, r) and oracle.inside(pp.c_lambda, c) and oracle.inside(pp.d, d)
    assert abs(pp.r.mid_float() - 1.79868) < 1e-5
    assert abs(pp.d.mid_float() - float(d)) < 1e-6


def test_asymptotic_choice_feasible_near_1e9():
    pp = paper_parameters(1_000_000_007, 1, 1, THETA)
    _, _, d = oracle_asymptotic(1_000_000_007)
    assert pp.feasible and float(d) > 0
    assert abs(pp.d.mid_float() - float(d)) < 1e-6
    assert abs(pp.d.mid_float() - 0.198) < 1e-3


def test_asymptotic_choice_domain():
    with pytest.raises(DomainError):
        paper_parameters(2, 1, 1, THETA)
    with pytest.raises(DomainError):
        paper_parameters(91, 1, 1, THETA)


# -- optimizer -------------------------------------------------------------------


def test_balance_radius_root():
    for s in (0.1, 0.7, 1.6, 3.0):
        r = balance_radius(s)
        assert abs(math.pi * math.sinh(r) - (s - r)) < 1e-8


@pytest.mark.parametrize("p,k,bound", [(5, 1, 2.4558), (5, 100, 1.08252), (3, 97, 0.5233)])
def test_optimizer_examples(p, k, bound):
    b = base_surface(p)
    plan = optimize_parameters(b, k)
    grid, _, _ = oracle.grid_optimum(p, b.genus, k)
    assert abs(plan.bound.lo_float() - bound) < 1e-3
    assert grid <= plan.bound.lo_float() + 1e-2
    assert 2 * k <= plan.packing_N


def test_optimizer_k1_radii():
    plan = optimize_parameters(base_surface(5), 1)
    assert abs(plan.r.mid_float() - 0.3815) < 1e-4
    assert abs(plan.d.mid_float() - 1.2279) < 1e-4


def test_optimizer_k100_cap():
    plan = optimize_parameters(base_surface(5), 100)
    assert abs(plan.s.mid_float() - math.asinh(math.sqrt(0.6))) < 1e-9
    assert abs(plan.r.mid_float() - 0.17145) < 1e-5


def test_optimizer_k_zero_rejected():
    with pytest.raises(DomainError):
        optimize_parameters(base_surface(5), 0)


def _instances(n, seed):
    rng = random.Random(seed)
    out = []
    for _ in range(n):
        p = rng.choice(SMALL_ODD)
        nu = rng.choice((1, 2))
        b = base_surface(p, nu)
        out.append((b, rng.randint(1, (b.genus - 1) // 2)))
    return out


def _feasibility_sound(plan):
    b = plan.base
    assert 2 * plan.k <= packing_lower_bound(b.genus, plan.s)
    assert certainly_le(plan.s + as_interval(SEPARATION_MARGIN), b.log_p)
    for term in (b.sys_floor, disk_perimeter(plan.r), plan.d * 2):
        assert certainly_le(P(plan.bound.lo), term)


@pytest.mark.parametrize("b,k", _instances(25, 7), ids=lambda x: getattr(x, "p", x))
def test_optimizer_invariants(b, k):
    plan = optimize_parameters(b, k)
    _feasibility_sound(plan)
    if plan.bound.hi_float() < b.sys_floor.lo_float():
        gap = abs(2 * math.pi * math.sinh(plan.r.mid_float()) - 2 * plan.d.mid_float())
        assert gap <= 1e-6
    if 2 * (k + 1) <= b.genus - 1:
        nxt = optimize_parameters(b, k + 1)
        assert nxt.bound.lo_float() <= plan.bound.lo_float() + 1e-9


def test_dominates_asymptotic_choice():
    p = 1_000_000_007
    b = base_surface(p)
    pp = paper_parameters(p, 1, 1, THETA)
    fixed = plan_from_radii(b, 1, pp.r, pp.d)
    best = optimize_parameters(b, 1)
    assert best.bound.lo_float() >= fixed.bound.lo_float() - 1e-9
