"""Exact counting: periodic-point counts, totients, and critical bounds.

Oracles: nu is cross-checked against the Moebius inversion of
sum_{m|n} nu(m) = 2^n, which the implementation never uses; phi against a
brute-force gcd count.
"""

from math import gcd

import pytest

from multcrit.dynamics import (
    CountingTable,
    euler_phi,
    multiplier_critical_bound,
    periodic_point_count,
    projection_critical_count,
)
from multcrit.errors import DomainError

TABLE1_BOUNDS = {3: 2, 4: 6, 5: 20, 6: 38, 7: 102, 8: 198, 9: 436, 10: 868}


def _mobius(n):
    result, m = 1, n
    p = 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            result = -result
        p += 1
    if m > 1:
        result = -result
    return result


def _nu_mobius(n):
    return sum(_mobius(n // d) * 2**d for d in range(1, n + 1) if n % d == 0)


def test_nu_examples():
    assert periodic_point_count(1) == 2
    assert periodic_point_count(2) == 2
    assert periodic_point_count(6) == 54


def test_nu_against_mobius_inversion():
    for n in range(1, 33):
        assert periodic_point_count(n) == _nu_mobius(n)


def test_nu_divisor_sum_is_power_of_two():
    for n in range(1, 21):
        total = sum(
            periodic_point_count(m) for m in range(1, n + 1) if n % m == 0
        )
        assert total == 2**n


def test_nu_domain_errors():
    with pytest.raises(DomainError):
        periodic_point_count(0)
    with pytest.raises(DomainError):
        periodic_point_count(65)


def test_euler_phi_examples_and_oracle():
    assert euler_phi(1) == 1
    assert euler_phi(4) == 2
    assert euler_phi(7) == 6
    for r in range(1, 61):
        brute = sum(1 for k in range(1, r + 1) if gcd(k, r) == 1)
        assert euler_phi(r) == brute
    with pytest.raises(DomainError):
        euler_phi(0)


def test_projection_critical_count_examples():
    assert projection_critical_count(1) == 1
    assert projection_critical_count(3) == 1  # 3 - 1*phi(3)
    assert projection_critical_count(6) == 20  # 27 - (2 + 2 + 3)


def test_bound_examples_and_table_row():
    assert multiplier_critical_bound(1) == 0
    assert multiplier_critical_bound(2) == 0
    for n, bound in TABLE1_BOUNDS.items():
        assert multiplier_critical_bound(n) == bound


def test_counting_table_invariants():
    table = CountingTable.build(20)
    assert table.nu[0] == 2
    assert all(v > 0 for v in table.nu)
    assert all(v > 0 for v in table.phi)
    for n in range(1, 21):
        total = sum(table.nu[m - 1] for m in range(1, n + 1) if n % m == 0)
        assert total == 2**n
    with pytest.raises(DomainError):
        CountingTable.build(0)
