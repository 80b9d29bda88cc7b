"""Membership, c=0 angle machinery, and summary statistics.

The scan kernel computes derivative sums by walking integer doubling
orbits; the oracle here recomputes every angle through the literal formula
with modular exponentiation, a genuinely different code path.
"""

import pytest

from multcrit.analysis import (
    RationalAngle,
    c0_derivative,
    c0_periodic_angles,
    c0_scan,
    c0_scan_detailed,
    mandelbrot_member,
    stats,
)
from multcrit.dynamics import periodic_point_count
from multcrit.errors import DomainError


def test_mandelbrot_examples():
    assert mandelbrot_member(0.0).inside
    v = mandelbrot_member(1.0)
    assert not v.inside and v.iterations_used <= 4
    assert mandelbrot_member(-2.0).inside
    assert not mandelbrot_member(0.3 + 0.6j).inside
    with pytest.raises(DomainError):
        mandelbrot_member(complex("inf"))


def test_mandelbrot_conjugation_symmetric():
    for c in (0.3 + 0.5j, -0.12 + 0.75j, -1.0 + 0.3j):
        a = mandelbrot_member(c)
        b = mandelbrot_member(c.conjugate())
        assert a.inside == b.inside
        assert a.iterations_used == b.iterations_used


def test_rational_angle_validation():
    with pytest.raises(DomainError):
        RationalAngle(1, 6)  # even denominator
    with pytest.raises(DomainError):
        RationalAngle(3, 9)  # not reduced
    with pytest.raises(DomainError):
        RationalAngle(9, 7)  # out of range
    assert RationalAngle.from_fraction(7, 63) == RationalAngle(1, 9)
    assert str(RationalAngle(2, 5)) == "2/5"


def test_angle_doubling_periods():
    assert RationalAngle(0, 1).doubling_period() == 1
    assert RationalAngle(1, 3).doubling_period() == 2
    assert RationalAngle(1, 9).doubling_period() == 6


def test_periodic_angles_small_cases():
    assert c0_periodic_angles(1) == [RationalAngle(0, 1)]
    assert c0_periodic_angles(2) == [RationalAngle(1, 3)]
    assert len(c0_periodic_angles(4)) == 3
    assert RationalAngle(1, 9) in c0_periodic_angles(6)


def test_periodic_angle_counts_match_nu():
    for n in range(2, 15):
        angles = c0_periodic_angles(n)
        assert len(angles) == periodic_point_count(n) // n
        for a in angles:
            assert a.doubling_period() == n


def test_periodic_angles_are_orbit_minima():
    for n in (5, 6, 8):
        den = (1 << n) - 1
        for a in c0_periodic_angles(n):
            k = a.num * (den // a.den)
            orbit = {k * pow(2, j, den) % den for j in range(n)}
            assert k == min(orbit)


def test_c0_derivative_examples():
    assert c0_derivative(1, RationalAngle(0, 1)) == -2.0
    assert abs(c0_derivative(6, RationalAngle(1, 9))) < 1e-12
    assert abs(c0_derivative(6, RationalAngle(1, 63))) > 1e-6
    with pytest.raises(DomainError):
        c0_derivative(5, RationalAngle(1, 9))  # angle has period 6, not 5


def _scan_by_literal_formula(max_n, tol):
    """Oracle: filter c0_periodic_angles through the exponent-sum formula."""
    out = {}
    for n in range(2, max_n + 1):
        hits = [
            a
            for a in c0_periodic_angles(n)
            if abs(c0_derivative(n, a)) < tol * 2.0**n
        ]
        if hits:
            out[n] = hits
    return out


def test_scan_kernel_against_literal_formula():
    got = c0_scan(14)
    want = _scan_by_literal_formula(14, 1e-9)
    assert got == want == {6: [RationalAngle(1, 9)], 12: [RationalAngle(1, 45), RationalAngle(7, 45)]}


def test_scan_examples():
    assert c0_scan(10) == {6: [RationalAngle(1, 9)]}
    hits, marginal = c0_scan_detailed(16)
    assert sorted(hits) == [6, 12]
    assert marginal == {}


def test_scan_rejects_bad_inputs():
    with pytest.raises(DomainError):
        c0_scan(0)
    with pytest.raises(DomainError):
        c0_scan(31)
    with pytest.raises(DomainError):
        c0_scan(10, tol=-1.0)


def test_stats_row(search_cache):
    rs, _, _ = search_cache.get(5)
    row = stats(rs)
    assert row.count == 20
    assert row.inside_count == 4
    assert row.inside_pct == pytest.approx(20.0)
    assert row.outside_pct == pytest.approx(80.0)
    assert row.min_lambda_abs == pytest.approx(4.9417, abs=5e-3)


def test_stats_empty_set_raises():
    from multcrit.solver import ResultSet

    with pytest.raises(DomainError):
        stats(ResultSet(period=3, bound=2))


def test_annotate_membership_fills_flags(search_cache):
    rs, _, _ = search_cache.get(4)
    assert all(r.inside_mandelbrot is not None for r in rs.records)
    for r in rs.records:
        assert r.inside_mandelbrot == mandelbrot_member(r.c).inside
