"""Post-processing: Mandelbrot membership, per-period statistics, and the
exact c=0 derivative analysis.

At c=0 the periodic points of z^2 are roots of unity of odd order, indexed
by rational angles k/(2^n - 1) under angle doubling. The multiplier
derivative there reduces to an exact exponential sum, so critical points
with c=0 can be certified directly instead of searched for.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from math import gcd

import numpy as np
from numba import njit

from .dynamics import periodic_point_count
from .errors import DomainError

_SCAN_MAX_N = 30
_MARGINAL_FACTOR = 1e3


@dataclass(frozen=True)
class MandelbrotVerdict:
    inside: bool
    iterations_used: int


def mandelbrot_member(c: complex, max_iter: int = 5000) -> MandelbrotVerdict:
    """Escape-time membership test for the critical orbit of z^2 + c.

    Radius-2 escape; a verdict of inside after max_iter iterations can be
    wrong very close to the boundary, which only matters at the coarse
    percentage level reported here.
    """
    if not (math.isfinite(c.real) and math.isfinite(c.imag)):
        raise DomainError(f"non-finite parameter {c!r}")
    z = 0.0 + 0.0j
    for it in range(1, max_iter + 1):
        z = z * z + c
        if (z.real * z.real + z.imag * z.imag) > 4.0:
            return MandelbrotVerdict(inside=False, iterations_used=it)
    return MandelbrotVerdict(inside=True, iterations_used=max_iter)


@dataclass(frozen=True, order=True)
class RationalAngle:
    """Reduced angle num/den on the circle, den odd; z0 = e^{2 pi i num/den}."""

    num: int
    den: int

    def __post_init__(self):
        if self.den <= 0 or self.den % 2 == 0:
            raise DomainError(f"denominator must be odd positive, got {self.den}")
        if not 0 <= self.num < self.den:
            raise DomainError(f"numerator {self.num} outside [0, {self.den})")
        if gcd(self.num, self.den) != 1:
            raise DomainError(f"{self.num}/{self.den} is not reduced")

    @classmethod
    def from_fraction(cls, num: int, den: int) -> "RationalAngle":
        g = gcd(num, den)
        return cls(num // g, den // g)

    def doubling_period(self) -> int:
        """Length of the angle's orbit under a -> 2a mod 1."""
        if self.den == 1:
            return 1
        # multiplicative order of 2 modulo den (den odd, so it exists)
        m, j = 2 % self.den, 1
        while m != 1:
            m = (2 * m) % self.den
            j += 1
        return j

    def __str__(self) -> str:
        return f"{self.num}/{self.den}"


@njit(cache=True)
def _rep_kernel(n, out):
    """Fill `out` with the minimal element of every length-n doubling orbit
    modulo 2^n - 1, ascending. Returns the count."""
    big = np.int64(1) << n
    mod = big - 1
    cnt = 0
    for k in range(0, mod):
        m = k
        length = 0
        ok = True
        for _ in range(n):
            m = m << 1
            if m >= mod:
                m -= mod
            length += 1
            if m < k:
                ok = False
                break
            if m == k:
                break
        if ok and length == n:
            out[cnt] = k
            cnt += 1
    return cnt


@njit(cache=True)
def _scan_kernel(n, tol, marginal_factor, hit_out, marg_out, marg_abs_out):
    """One period of the c=0 critical scan.

    For each representative angle k/(2^n - 1) the derivative sum equals the
    sum of e^{-2 pi i m/(2^n-1)} over the exact integer orbit of k, because
    the exponents -2^{j+1} k land back on the orbit itself. Orbit points are
    advanced by integer doubling, so no precision is lost to floating
    exponentiation. Returns (hits, marginals, overflowed)."""
    big = np.int64(1) << n
    mod = big - 1
    cap_h = hit_out.shape[0]
    cap_m = marg_out.shape[0]
    nh = 0
    nm = 0
    overflow = False
    two_pi = 2.0 * math.pi
    for k in range(1, mod):
        m = k
        length = 0
        ok = True
        for _ in range(n):
            m = m << 1
            if m >= mod:
                m -= mod
            length += 1
            if m < k:
                ok = False
                break
            if m == k:
                break
        if not ok or length != n:
            continue
        s_re = 0.0
        s_im = 0.0
        m = k
        for _ in range(n):
            ang = -two_pi * (m / mod)
            s_re += math.cos(ang)
            s_im += math.sin(ang)
            m = m << 1
            if m >= mod:
                m -= mod
        mag = math.sqrt(s_re * s_re + s_im * s_im)
        if mag < tol:
            if nh < cap_h:
                hit_out[nh] = k
                nh += 1
            else:
                overflow = True
        elif mag < tol * marginal_factor:
            if nm < cap_m:
                marg_out[nm] = k
                marg_abs_out[nm] = mag
                nm += 1
            else:
                overflow = True
    return nh, nm, overflow


def c0_periodic_angles(n: int) -> list[RationalAngle]:
    """Smallest angle of every period-n orbit of angle doubling.

    One angle per period-n orbit of k -> 2k mod (2^n - 1). For n >= 2 the
    count is nu(n)/n; for n=1 only the angle 0/1 appears, since the second
    fixed point of z^2 is z=0, which is not a root of unity.
    """
    if not 1 <= n <= _SCAN_MAX_N:
        raise DomainError(f"period must be in 1..{_SCAN_MAX_N}, got {n}")
    if n == 1:
        return [RationalAngle(0, 1)]
    want = periodic_point_count(n) // n
    out = np.empty(want, dtype=np.int64)
    cnt = _rep_kernel(n, out)
    assert cnt == want, f"orbit count {cnt} != nu({n})/{n} = {want}"
    den = (1 << n) - 1
    return [RationalAngle.from_fraction(int(k), den) for k in out]


def c0_derivative(n: int, a: RationalAngle) -> complex:
    """Multiplier derivative at (c, z) = (0, e^{2 pi i a}) on the period-n curve.

    Evaluates -2^n * sum_j z0^{-2^(j+1)} for j = 0..n-1 with the exponents
    reduced by exact modular arithmetic; repeated floating squaring would
    destroy the angle long before n=30.
    """
    if n < 1:
        raise DomainError(f"period must be positive, got {n}")
    if a.doubling_period() != n:
        raise DomainError(f"angle {a} has doubling period {a.doubling_period()}, not {n}")
    s = 0.0 + 0.0j
    for j in range(n):
        e = (a.num * pow(2, j + 1, a.den)) % a.den
        s += cmath.exp(complex(0.0, -2.0 * math.pi * e / a.den))
    return -(2.0**n) * s


def c0_scan_detailed(
    max_n: int, tol: float = 1e-9, marginal_factor: float = _MARGINAL_FACTOR
) -> tuple[dict[int, list[RationalAngle]], dict[int, list[tuple[RationalAngle, float]]]]:
    """Scan all periods n <= max_n for critical points at c=0.

    Returns (hits, marginal): hits maps period to the angles whose
    derivative modulus falls below tol * 2^n; marginal collects angles
    landing within a factor `marginal_factor` above the threshold, so a
    badly calibrated tolerance shows up as data instead of silently
    changing the period set. Periods with no entries are omitted.
    """
    if not 1 <= max_n <= _SCAN_MAX_N:
        raise DomainError(f"max_n must be in 1..{_SCAN_MAX_N}, got {max_n}")
    if tol <= 0:
        raise DomainError("tol must be positive")
    hits: dict[int, list[RationalAngle]] = {}
    marginal: dict[int, list[tuple[RationalAngle, float]]] = {}
    cap = 1 << 16
    hit_buf = np.empty(cap, dtype=np.int64)
    marg_buf = np.empty(cap, dtype=np.int64)
    marg_abs = np.empty(cap, dtype=np.float64)
    for n in range(2, max_n + 1):
        nh, nm, overflow = _scan_kernel(
            n, tol, marginal_factor, hit_buf, marg_buf, marg_abs
        )
        if overflow:
            raise DomainError(
                f"period {n}: more than {cap} near-critical angles; tolerance "
                f"{tol} is far off the zero scale of the derivative sum"
            )
        den = (1 << n) - 1
        if nh:
            hits[n] = [RationalAngle.from_fraction(int(k), den) for k in hit_buf[:nh]]
        if nm:
            marginal[n] = [
                (RationalAngle.from_fraction(int(k), den), float(v) * 2.0**n)
                for k, v in zip(marg_buf[:nm], marg_abs[:nm])
            ]
    return hits, marginal


def c0_scan(max_n: int, tol: float = 1e-9) -> dict[int, list[RationalAngle]]:
    """Periods and angles with |c0_derivative| < tol * 2^n, up to max_n."""
    hits, _ = c0_scan_detailed(max_n, tol)
    return hits


@dataclass(frozen=True)
class StatsRow:
    count: int
    inside_count: int
    outside_count: int
    inside_pct: float
    outside_pct: float
    min_lambda_abs: float


def annotate_membership(rs) -> None:
    """Fill inside_mandelbrot on every record that does not have it yet."""
    for r in rs.records:
        if r.inside_mandelbrot is None:
            r.inside_mandelbrot = mandelbrot_member(r.c).inside


def stats(rs) -> StatsRow:
    """Summary row over a result set: counts, membership split, min |lambda|."""
    if not rs.records:
        raise DomainError("stats of an empty result set")
    inside = 0
    for r in rs.records:
        flag = r.inside_mandelbrot
        if flag is None:
            flag = mandelbrot_member(r.c).inside
        inside += bool(flag)
    count = len(rs.records)
    outside = count - inside
    return StatsRow(
        count=count,
        inside_count=inside,
        outside_count=outside,
        inside_pct=100.0 * inside / count,
        outside_pct=100.0 * outside / count,
        min_lambda_abs=min(r.lambda_abs for r in rs.records),
    )
