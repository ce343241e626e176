import io
import json
import math
from fractions import Fraction

import pytest

import oracle
from sysw.audit import (
    CSV_COLUMNS,
    asymptotic_constant,
    audit_range,
    candidate_primes,
    find_witness,
)
from sysw.config import Config
from sysw.congruence import base_surface, genus_of
from sysw.errors import DomainError, NoWitnessError
from sysw.hyperbolic import systole_upper_bound
from sysw.interval import certainly_le
from sysw.primes import primes_up_to
from sysw.surgery import optimize_parameters

SERIAL = Config(jobs=1)


@pytest.mark.parametrize("theta,want", [
    (Fraction(21, 40), Fraction(19, 120)),
    (Fraction(1, 2), Fraction(1, 6)),
    (Fraction(1, 10**12), (1 - Fraction(1, 10**12)) / 3),
])
def test_asymptotic_constant(theta, want):
    assert asymptotic_constant(theta) == want


def test_asymptotic_constant_domain():
    with pytest.raises(DomainError):
        asymptotic_constant(0)


def test_candidate_primes():
    assert candidate_primes(122, 1, 5) == [5, 3]
    assert candidate_primes(336, 1, 5) == [5, 3]
    assert candidate_primes(337, 1, 5) == [7, 5, 3]
    assert candidate_primes(10**6, 1, 3) == [97, 89, 83]


def test_witness_at_base_genus():
    w = find_witness(121, 1, SERIAL)
    assert (w.plan.base.p, w.plan.k) == (5, 0)
    with oracle.hp():
        assert oracle.inside(w.plan.bound, 4 * oracle.ln(5))
        assert oracle.inside(w.ratio, 4 * oracle.ln(5) / oracle.ln(121))
    assert abs(w.ratio.mid_float() - 1.342) < 1e-3


def test_witness_just_above_base_genus():
    w = find_witness(122, 1, SERIAL)
    assert (w.plan.base.p, w.plan.k) == (5, 1)
    assert abs(w.plan.bound.lo_float() - 2.455) < 1e-3
    rival = optimize_parameters(base_surface(3), 97)
    assert rival.bound.hi_float() < w.plan.bound.lo_float()
    assert abs(rival.bound.lo_float() - 0.52) < 0.01


def test_no_witness_below_threshold():
    with pytest.raises(NoWitnessError) as exc:
        find_witness(24, 1, SERIAL)
    assert exc.value.threshold == 25 and exc.value.genus == 24
    with pytest.raises(NoWitnessError) as exc:
        find_witness(48, 2, Config(nu=2, jobs=1))
    assert exc.value.threshold == 49
    assert find_witness(49, 2, Config(nu=2, jobs=1)).plan.k == 0


def test_audit_small_range():
    rep = audit_range(25, 121, 1, SERIAL)
    assert rep.failures == ()
    assert [r.genus for r in rep.rows] == list(range(25, 122))
    assert 117 <= rep.argmin_row.genus <= 121
    assert rep.argmin_row.genus == 120


def test_audit_min_ratio_matches_grid_oracle():
    rep = audit_range(115, 121, 1, SERIAL)
    for row in rep.rows:
        if row.k == 0:
            continue
        grid, _, _ = oracle.grid_optimum(row.p, genus_of(row.p), row.k)
        assert grid <= float(row.ratio.hi_float()) * math.log(row.genus) + 1e-2


def test_audit_below_threshold():
    rep = audit_range(2, 24, 1, SERIAL)
    assert rep.failures == tuple(range(2, 25)) and rep.rows == ()
    assert rep.min_ratio is None
    assert rep.summary()["min_ratio"] is None


def test_audit_single_base_genus():
    rep = audit_range(121, 121, 1, SERIAL)
    assert len(rep.rows) == 1
    assert abs(rep.min_ratio.mid_float() - 1.342) < 1e-3


def test_audit_empty_range():
    with pytest.raises(DomainError):
        audit_range(10, 9, 1, SERIAL)


def test_exact_at_every_base_genus():
    for p in primes_up_to(60)[1:]:
        w = find_witness(genus_of(p), 1, SERIAL)
        assert w.plan.k == 0 and w.plan.base.p == p
        assert w.plan.bound.width() <= Fraction(1, 10**9)


def test_bounds_respect_upper_bound():
    rep = audit_range(25, 1500, 1, SERIAL)
    for row in rep.rows:
        with oracle.hp():
            assert 0 < oracle.D(row.bound_lo) <= 2 * oracle.ln(4 * row.genus - 2)
    w = find_witness(1331, 1, SERIAL)
    assert certainly_le(w.plan.bound, systole_upper_bound(1331))


def test_reports_and_columns():
    rep = audit_range(118, 123, 1, SERIAL)
    buf = io.StringIO()
    rep.write_csv(buf)
    lines = buf.getvalue().splitlines()
    assert lines[0].split(",") == CSV_COLUMNS
    fields = dict(zip(CSV_COLUMNS, lines[4].split(",")))  # genus 121
    assert fields["genus"] == "121" and fields["k"] == "0" and fields["r_lo"] == ""
    assert Fraction(fields["bound_lo"]) <= Fraction(4) * Fraction(math.log(5)) + Fraction(1, 10**12)
    plot = io.StringIO()
    rep.write_plot_csv(plot)
    assert plot.getvalue().splitlines()[0] == "genus,ratio_lo"
    js = io.StringIO()
    rep.write_json(js)
    summary = json.loads(js.getvalue())
    assert summary["asymptotic_constant"] == "19/120"
    assert summary["failures"] == []
    assert summary["min_ratio"]["genus"] == 120


def test_parallel_matches_serial():
    a, b = io.StringIO(), io.StringIO()
    audit_range(25, 600, 1, SERIAL).write_csv(a)
    audit_range(25, 600, 1, Config(jobs=3)).write_csv(b)
    assert a.getvalue() == b.getvalue()


@pytest.mark.slow
def test_trend_over_large_primes():
    # [g_43, g_47] against the small-genus range
    small = audit_range(25, 121, 1, SERIAL).min_ratio
    big = audit_range(genus_of(43), genus_of(47), 1, Config()).min_ratio
    assert big.lo_fraction() >= small.lo_fraction()
