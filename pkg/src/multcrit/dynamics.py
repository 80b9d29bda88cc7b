"""Arithmetic kernel for the quadratic family p_c(z) = z^2 + c.

Forward-propagated derivative jets of the n-th iterate, the multiplier of a
periodic orbit, the derivative of a tracked periodic point with respect to c,
and the exact integer counting formulas used to know when a search is done.

All derivatives are exact jet propagation, never numerical differencing;
finite differences only appear in the test suite as an independent oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isfinite
from typing import NamedTuple

from .errors import DomainError, JetOverflowError, ParabolicChartError

# Relative error convention used across the package: values range from O(1)
# to O(2^n), so errors are measured against max(1, |a|, |b|).


def rel_err(a: complex, b: complex) -> float:
    return abs(a - b) / max(1.0, abs(a), abs(b))


def _check_finite(*values: complex) -> bool:
    for w in values:
        if not (isfinite(w.real) and isfinite(w.imag)):
            return False
    return True


# ---------------------------------------------------------------------------
# counting
# ---------------------------------------------------------------------------

_NU_MAX = 64


def periodic_point_count(n: int) -> int:
    """Number of period-n periodic points of p_c for generic c.

    nu(1) = 2 and nu(n) = 2^n - sum of nu(m) over proper divisors m of n,
    so that the nu(m) for m | n partition the 2^n fixed points of the n-th
    iterate. Exact integer arithmetic throughout.
    """
    if not isinstance(n, int) or isinstance(n, bool):
        raise DomainError(f"period must be an integer, got {n!r}")
    if n < 1 or n > _NU_MAX:
        raise DomainError(f"period must be in 1..{_NU_MAX}, got {n}")
    counts = _nu_table(n)
    return counts[n]


def _nu_table(n_max: int) -> list[int]:
    # counts[0] unused; counts[m] = nu(m)
    counts = [0] * (n_max + 1)
    for m in range(1, n_max + 1):
        total = 2**m
        for d in range(1, m):
            if m % d == 0:
                total -= counts[d]
        counts[m] = total
    return counts


def euler_phi(r: int) -> int:
    """Euler's totient: how many k in 1..r are coprime to r."""
    if not isinstance(r, int) or isinstance(r, bool) or r < 1:
        raise DomainError(f"totient argument must be a positive integer, got {r!r}")
    result = r
    m = r
    p = 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def projection_critical_count(n: int) -> int:
    """Number of critical points of the projection (c, orbit) -> c.

    deg lambda_n - sum over factorizations n = r*p (p < n) of
    deg lambda_p * phi(r), with deg lambda_k = nu(k) / 2.
    """
    counts = _nu_table(n)
    assert counts[n] % 2 == 0
    total = counts[n] // 2
    for p in range(1, n):
        if n % p == 0:
            assert counts[p] % 2 == 0
            total -= (counts[p] // 2) * euler_phi(n // p)
    return total


def multiplier_critical_bound(n: int) -> int:
    """Upper bound for the number of critical points of the multiplier map.

    nu(n) - nu(n)/n - (1/2) * sum over n = r*p, p < n, of nu(p) * phi(r).
    Every division here is exact; a fractional intermediate means the
    counting recurrence is broken.
    """
    counts = _nu_table(n)
    nu_n = counts[n]
    if nu_n % n != 0:
        raise AssertionError(f"nu({n}) = {nu_n} not divisible by {n}")
    acc = 0
    for p in range(1, n):
        if n % p == 0:
            acc += counts[p] * euler_phi(n // p)
    if acc % 2 != 0:
        raise AssertionError(f"odd divisor sum {acc} for n = {n}")
    return nu_n - nu_n // n - acc // 2


@dataclass(frozen=True)
class CountingTable:
    """Exact nu and phi values for periods 1..n_max."""

    n_max: int
    nu: tuple[int, ...]
    phi: tuple[int, ...]

    @classmethod
    def build(cls, n_max: int) -> "CountingTable":
        if n_max < 1 or n_max > _NU_MAX:
            raise DomainError(f"n_max must be in 1..{_NU_MAX}, got {n_max}")
        counts = _nu_table(n_max)
        return cls(
            n_max=n_max,
            nu=tuple(counts[1:]),
            phi=tuple(euler_phi(m) for m in range(1, n_max + 1)),
        )


# ---------------------------------------------------------------------------
# jets
# ---------------------------------------------------------------------------


class Jet3(NamedTuple):
    """Value of the n-th iterate at (c, z) with all (z, c)-partials to order 3.

    Entry names use subscript order, e.g. ``d_zzc`` is d^3/(dz dz dc).
    """

    v: complex
    d_z: complex
    d_c: complex
    d_zz: complex
    d_zc: complex
    d_cc: complex
    d_zzz: complex
    d_zzc: complex
    d_zcc: complex
    d_ccc: complex

    @classmethod
    def identity(cls, z: complex) -> "Jet3":
        """Order-0 jet: the identity map in z, constant in c."""
        return cls(z, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0)


def orbit_jet(c: complex, z: complex, n: int) -> Jet3:
    """Propagate the order-3 jet of the n-th iterate through z -> z^2 + c.

    One step maps a jet W of some iterate to the jet of its successor:

        v'     = v^2 + c
        d_z'   = 2 v d_z
        d_c'   = 2 v d_c + 1
        d_zz'  = 2 (d_z^2 + v d_zz)
        d_zc'  = 2 (d_z d_c + v d_zc)
        d_cc'  = 2 (d_c^2 + v d_cc)
        d_zzz' = 2 (3 d_z d_zz + v d_zzz)
        d_zzc' = 2 (d_zz d_c + 2 d_zc d_z + v d_zzc)
        d_zcc' = 2 (d_cc d_z + 2 d_zc d_c + v d_zcc)
        d_ccc' = 2 (3 d_cc d_c + v d_ccc)

    applied n times starting from the identity jet in z.
    """
    if n < 1:
        raise DomainError(f"iterate count must be >= 1, got {n}")
    c = complex(c)
    z = complex(z)
    if not _check_finite(c, z):
        raise DomainError("inputs must be finite")
    v = z
    dz = 1.0 + 0.0j
    dc = 0.0j
    dzz = 0.0j
    dzc = 0.0j
    dcc = 0.0j
    dzzz = 0.0j
    dzzc = 0.0j
    dzcc = 0.0j
    dccc = 0.0j
    for _ in range(n):
        dccc = 2.0 * (3.0 * dcc * dc + v * dccc)
        dzcc = 2.0 * (dcc * dz + 2.0 * dzc * dc + v * dzcc)
        dzzc = 2.0 * (dzz * dc + 2.0 * dzc * dz + v * dzzc)
        dzzz = 2.0 * (3.0 * dz * dzz + v * dzzz)
        dcc = 2.0 * (dc * dc + v * dcc)
        dzc = 2.0 * (dz * dc + v * dzc)
        dzz = 2.0 * (dz * dz + v * dzz)
        dc = 2.0 * v * dc + 1.0
        dz = 2.0 * v * dz
        v = v * v + c
    jet = Jet3(v, dz, dc, dzz, dzc, dcc, dzzz, dzzc, dzcc, dccc)
    if not _check_finite(*jet):
        raise JetOverflowError(_first_bad_step(c, z, n))
    return jet


def _first_bad_step(c: complex, z: complex, n: int) -> int:
    # Diagnostic re-run: find the first step whose value goes non-finite.
    v = z
    for k in range(n):
        v = v * v + c
        if not _check_finite(v):
            return k
    return n - 1


def orbit_points(c: complex, z: complex, n: int) -> list[complex]:
    """[z, p(z), ..., p^(n-1)(z)]: first n points of the forward orbit."""
    if n < 1:
        raise DomainError(f"orbit length must be >= 1, got {n}")
    pts = [complex(z)]
    w = complex(z)
    for _ in range(n - 1):
        w = w * w + c
        pts.append(w)
    return pts


def multiplier(c: complex, z: complex, n: int) -> complex:
    """Multiplier 2^n z_1 ... z_n of the length-n orbit through z.

    Computed as the chain-rule product of 2 * p^i(z) over i = 0..n-1, which
    on a periodic orbit is the same set of factors and off the periodic
    locus is the one that equals d/dz of the n-th iterate identically.
    """
    w = complex(z)
    lam = 1.0 + 0.0j
    for k in range(n):
        lam *= 2.0 * w
        w = w * w + c
        if not _check_finite(w, lam):
            raise JetOverflowError(k)
    return lam


def periodic_point_derivative(c: complex, z: complex, n: int) -> complex:
    """dz/dc of the periodic point tracked through the c-chart.

    Differentiating p^n(z(c)) = z(c) gives
    z' = (d/dc p^n)(z) / (1 - lambda); the chart, and with it this value,
    breaks down on parabolic orbits where lambda = 1.
    """
    jet = orbit_jet(c, z, n)
    denom = 1.0 - jet.d_z
    if abs(denom) < 1e-9:
        raise ParabolicChartError(
            f"multiplier within 1e-9 of 1 (|1-lambda| = {abs(denom):.3e})"
        )
    return jet.d_c / denom


def multiplier_derivative_product(
    c: complex, z: complex, zp: complex, n: int
) -> complex:
    """d(lambda)/dc along the tracked branch, by the product rule.

    With w_k = p^k(z) and u_k = d w_k / dc the single forward pass
    u_0 = z', u_{k+1} = 2 w_k u_k + 1 feeds the total derivative of the
    n-fold product: 2^n * sum_i u_i * prod_{j != i} w_j.
    """
    ws = orbit_points(c, z, n)
    us = [complex(zp)]
    for k in range(n - 1):
        us.append(2.0 * ws[k] * us[k] + 1.0)
    total = 0.0j
    for i in range(n):
        term = us[i]
        for j in range(n):
            if j != i:
                term *= ws[j]
        total += term
    result = (2.0**n) * total
    if not _check_finite(result):
        raise JetOverflowError(n - 1)
    return result


def multiplier_derivative_jet(c: complex, z: complex, zp: complex, n: int) -> complex:
    """d(lambda)/dc along the tracked branch, by the chain rule on the jet.

    lambda(c) = (d/dz p^n)(c, z(c)), so the derivative is
    d_zz * z' + d_zc. Agrees with the product form to 1e-9 relative error.
    """
    jet = orbit_jet(c, z, n)
    result = jet.d_zz * zp + jet.d_zc
    if not _check_finite(result):
        raise JetOverflowError(n - 1)
    return result
