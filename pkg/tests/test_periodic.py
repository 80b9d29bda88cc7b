"""Root finding, minimal periods, orbit grouping, and Newton start triples."""

import cmath
import math

import numpy as np
import pytest

from multcrit.dynamics import periodic_point_count
from multcrit.errors import (
    IncompleteRootsError,
    InconsistentRootError,
)
from multcrit.periodic import (
    Orbit,
    RootConfig,
    escape_radius,
    find_periodic_roots,
    group_into_orbits,
    initial_guesses,
    minimal_period,
)

CFG = RootConfig()


def _closest(points, w):
    return min(abs(p - w) for p in points)


def test_roots_c0_n2_exact_set():
    roots = find_periodic_roots(0.0, 2, CFG)
    assert len(roots) == 4
    expected = [0.0, 1.0, cmath.exp(2j * math.pi / 3), cmath.exp(4j * math.pi / 3)]
    for w in expected:
        assert _closest(roots, w) < 1e-9


def test_roots_cm1_n2_contains_superattracting_cycle():
    roots = find_periodic_roots(-1.0, 2, CFG)
    assert len(roots) == 4
    assert _closest(roots, 0.0) < 1e-9
    assert _closest(roots, -1.0) < 1e-9


def test_roots_partition_matches_counting():
    rng = np.random.default_rng(5)
    for _ in range(20):
        c = complex(*(2.0 * (rng.random(2) - 0.5) * 2.0))
        for n in range(1, 9):
            roots = find_periodic_roots(c, n, CFG)
            assert len(roots) == 2**n
            by_period = {}
            for z in roots:
                m = minimal_period(c, z, n)
                by_period[m] = by_period.get(m, 0) + 1
            for m in range(1, n + 1):
                if n % m == 0:
                    assert by_period.get(m, 0) == periodic_point_count(m), (
                        f"period-{m} count wrong at c={c}, n={n}"
                    )


def test_roots_deterministic():
    c = 0.3 - 0.7j
    a = find_periodic_roots(c, 6, CFG)
    b = find_periodic_roots(c, 6, CFG)
    assert np.array_equal(a, b)


def test_double_root_is_incomplete():
    # c=1/4 puts both fixed points at z=1/2; dedup cannot see two roots
    with pytest.raises(IncompleteRootsError):
        find_periodic_roots(0.25, 1, CFG)


def test_minimal_period_examples():
    assert minimal_period(0.0, 0.0, 4) == 1
    assert minimal_period(0.0, cmath.exp(2j * math.pi / 3), 4) == 2
    assert minimal_period(-1.0, 0.0, 6) == 2


def test_minimal_period_rejects_non_root():
    with pytest.raises(InconsistentRootError):
        minimal_period(0.3, 1.7 + 0.4j, 3)


def test_grouping_c0_n2():
    roots = find_periodic_roots(0.0, 2, CFG)
    orbits = group_into_orbits(0.0, roots, 2)
    assert len(orbits) == 1
    orb = orbits[0]
    assert orb.period == 2
    w1, w2 = cmath.exp(2j * math.pi / 3), cmath.exp(4j * math.pi / 3)
    assert _closest(orb.points, w1) < 1e-9
    assert _closest(orb.points, w2) < 1e-9
    # equal real parts, so the representative is the one with smaller imag
    assert abs(orb.representative - w2) < 1e-9
    assert orb.points[0] == orb.representative


def test_grouping_cm1_n2():
    roots = find_periodic_roots(-1.0, 2, CFG)
    orbits = group_into_orbits(-1.0, roots, 2)
    assert len(orbits) == 1
    assert abs(orbits[0].representative - (-1.0)) < 1e-9


def test_grouping_generic_n6_orbit_count():
    rng = np.random.default_rng(17)
    c = complex(*(rng.random(2) - 0.5))
    roots = find_periodic_roots(c, 6, CFG)
    orbits = group_into_orbits(c, roots, 6)
    assert len(orbits) == periodic_point_count(6) // 6 == 9


def test_orbit_closedness_and_rotation():
    rng = np.random.default_rng(29)
    c = complex(*(rng.random(2) - 0.5)) + 0.2j
    for n in (3, 5, 7):
        for orb in group_into_orbits(c, find_periodic_roots(c, n, CFG), n):
            pts = orb.points
            assert len(pts) == n
            for i, z in enumerate(pts):
                nxt = pts[(i + 1) % n]
                assert abs((z * z + c) - nxt) < 1e-8 * (1 + abs(z) ** 2)
            assert orb.representative == min(pts, key=lambda w: (w.real, w.imag))
            w = orb.representative
            for _ in range(n):
                w = w * w + c
            assert abs(w - orb.representative) < 1e-7 * (1 + abs(w))


def test_orbit_from_points_canonicalizes():
    c = -0.6 + 0.4j
    roots = find_periodic_roots(c, 3, CFG)
    orb = group_into_orbits(c, roots, 3)[0]
    rotated = orb.points[1:] + orb.points[:1]
    again = Orbit.from_points(c, list(rotated))
    assert again.points == orb.points


def test_initial_guesses_counts():
    rng = np.random.default_rng(37)
    c = complex(*(rng.random(2) - 0.5)) * 1.5
    assert len(initial_guesses(c, 3, CFG)) == 2
    assert len(initial_guesses(c, 1, CFG)) == 2
    for c0, z0, zp0 in initial_guesses(c, 4, CFG):
        assert c0 == c
        w = z0
        for _ in range(4):
            w = w * w + c
        assert abs(w - z0) < 1e-7


def test_initial_guesses_parabolic_parameter():
    # on the discriminant locus the root finder cannot resolve the double
    # root, which surfaces as incompleteness rather than a silent skip
    with pytest.raises(IncompleteRootsError):
        initial_guesses(0.25, 1, CFG)


def test_escape_radius_monotone():
    assert escape_radius(0.0) == pytest.approx(1.0)
    assert escape_radius(2.0) == pytest.approx(2.0)
    assert escape_radius(-2.0) == pytest.approx(2.0)
    r = escape_radius(0.9 + 0.2j)
    z = r + 1e-6
    assert abs(z * z + (0.9 + 0.2j)) > z
