"""Periodic points of p_c: find all of them, sort them into orbits.

The root finder runs Newton's method for p_c^n(z) - z = 0 simultaneously
from a large set of circle starts, in the style of the universal start sets
for polynomial root finding by Newton's method. The iterated form is always
evaluated by the n-step recurrence; expanding 2^n-degree coefficients is
numerically hopeless and never done here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import multiplier, periodic_point_derivative
from .errors import (
    DomainError,
    IncompleteRootsError,
    InconsistentRootError,
    NonGenericParameterError,
    OrbitGroupingError,
    ParabolicChartError,
)

_MAX_PERIOD = 12  # degree 2^n <= 4096

_PERIOD_TOL = 1e-8  # divisor test scale, relative to 1 + |z|
_MATCH_TOL = 1e-7  # orbit association radius, relative to 1 + |z|
_PARABOLIC_SKIP = 1e-6


@dataclass(frozen=True)
class RootConfig:
    """Knobs for the all-roots Newton run.

    tol: accepted residual |p^n(z) - z| relative to 1 + |z|.
    separation: dedup distance between roots, relative to 1 + |z|.
    max_rounds: start-set enlargements before giving up on this c.
    max_iters: Newton iteration cap per round.
    """

    tol: float = 1e-8
    separation: float = 1e-9
    max_rounds: int = 4
    max_iters: int = 512


@dataclass(frozen=True)
class Orbit:
    """A verified period-n cycle of p_c with a canonical representative."""

    c: complex
    period: int
    points: tuple[complex, ...]
    representative: complex

    @classmethod
    def from_points(cls, c: complex, points: list[complex]) -> "Orbit":
        rep = min(points, key=lambda w: (w.real, w.imag))
        k = points.index(rep)
        ordered = tuple(points[k:] + points[:k])
        return cls(c=complex(c), period=len(points), points=ordered, representative=rep)


def escape_radius(c: complex) -> float:
    """Radius beyond which orbits of p_c provably escape to infinity."""
    return 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * abs(c)))


def _newton_fixed_points(c, n, starts, max_iters, tol, want, separation):
    """Vectorized Newton for p^n(z) - z from the given start points.

    Returns deduplicated converged roots. A point is frozen as soon as its
    step falls below resolution; every 64 sweeps the converged set is
    deduplicated and the run stops early once `want` distinct roots exist.
    """
    z = np.asarray(starts, dtype=np.complex128)
    active = np.arange(z.size)
    out = np.empty_like(z)
    out_n = 0
    roots = np.empty(0, dtype=np.complex128)
    for sweep in range(max_iters):
        if active.size == 0:
            break
        za = z[active]
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            # far-field iterates overflow by design; they get nudged below
            w = za.copy()
            d = np.ones_like(za)
            for _ in range(n):
                d *= 2.0 * w
                w = w * w + c
            f = w - za
            fp = d - 1.0
            step = f / fp
        bad = ~np.isfinite(step)
        if bad.any():
            # dead derivative or overflow: nudge and carry on
            step[bad] = 0.1 + 0.1j
        znew = za - step
        done = np.abs(step) <= 1e-14 * (1.0 + np.abs(za))
        done |= ~np.isfinite(znew)
        if done.any():
            good = done & np.isfinite(znew) & (
                np.abs(f) <= tol * (1.0 + np.abs(za))
            )
            cnt = int(np.count_nonzero(good))
            out[out_n : out_n + cnt] = znew[good]
            out_n += cnt
            z[active[~done]] = znew[~done]
            active = active[~done]
        else:
            z[active] = znew
        if sweep % 64 == 63 and out_n >= want:
            roots = _dedup_sorted(out[:out_n], separation)
            if roots.size >= want:
                return roots
    return _dedup_sorted(out[:out_n], separation)


def _dedup_sorted(points: np.ndarray, separation: float) -> np.ndarray:
    """Deduplicate candidate roots: sort by (re, im), merge near-coincident."""
    if points.size == 0:
        return points
    order = np.lexsort((points.imag, points.real))
    pts = points[order]
    kept: list[complex] = []
    for w in pts:
        dup = False
        radius = separation * (1.0 + abs(w))
        for prev in reversed(kept):
            if w.real - prev.real > radius:
                break
            if abs(w - prev) < radius:
                dup = True
                break
        if not dup:
            kept.append(complex(w))
    return np.array(kept, dtype=np.complex128)


def find_periodic_roots(
    c: complex, n: int, cfg: RootConfig | None = None
) -> list[complex]:
    """All 2^n fixed points of the n-th iterate of p_c.

    Starts are equidistributed on a circle just outside the escape radius,
    s = max(256, ceil(4 d ln d)) of them for degree d = 2^n, doubled on
    each enlargement round. Raises IncompleteRootsError when the rounds are
    exhausted without 2^n distinct roots; the caller resamples c.
    """
    if n < 1 or n > _MAX_PERIOD:
        raise DomainError(f"period must be in 1..{_MAX_PERIOD}, got {n}")
    cfg = cfg or RootConfig()
    c = complex(c)
    d = 2**n
    r0 = escape_radius(c)
    s = max(256, math.ceil(4.0 * d * math.log(d)))
    found = np.empty(0, dtype=np.complex128)
    for round_no in range(cfg.max_rounds):
        # Start just outside the disc that contains every root; Newton's
        # far-field drift costs about d*ln(radius ratio) sweeps, so the
        # first round hugs the disc and later rounds back off for safety.
        radius = r0 * (1.0 + (2.0 * 4.0**round_no) / d) + 1e-3
        offset = 0.5 * round_no / cfg.max_rounds
        theta = 2.0 * np.pi * (np.arange(s) + offset) / s
        starts = radius * np.exp(1j * theta)
        converged = _newton_fixed_points(
            c, n, starts, cfg.max_iters, cfg.tol, d, cfg.separation
        )
        found = _dedup_sorted(np.concatenate([found, converged]), cfg.separation)
        if found.size == d:
            return [complex(w) for w in found]
        if found.size > d:
            raise IncompleteRootsError(
                f"{found.size} distinct roots for degree {d}: separation too tight"
            )
        s *= 2
    raise IncompleteRootsError(
        f"found {found.size} of {d} roots of period equation at c = {c}"
    )


def minimal_period(c: complex, z: complex, n: int) -> int:
    """Smallest divisor m of n with p^m(z) returning to z.

    z must already be a root of the period-n equation; if no divisor test
    passes, the root itself is inconsistent.
    """
    w = complex(z)
    scale = _PERIOD_TOL * (1.0 + abs(z))
    for m in range(1, n + 1):
        w = w * w + c
        if n % m == 0 and abs(w - z) < scale:
            return m
    raise InconsistentRootError(
        f"no divisor of {n} closes the orbit of {z} at c = {c}"
    )


def group_into_orbits(c: complex, roots: list[complex], n: int) -> list[Orbit]:
    """Partition the exact-period-n roots into cycles.

    Forward iterates are associated to the nearest root (and snapped to it,
    so orbits consist of polished roots, not drifted iterates). A generic c
    yields exactly nu(n)/n orbits; anything else is a resample signal.
    """
    from .dynamics import periodic_point_count

    exact = [z for z in roots if minimal_period(c, z, n) == n]
    expected = periodic_point_count(n) // n
    arr = np.array(exact, dtype=np.complex128)
    used = np.zeros(arr.size, dtype=bool)
    orbits: list[Orbit] = []
    for i in range(arr.size):
        if used[i]:
            continue
        cycle = [complex(arr[i])]
        used[i] = True
        w = arr[i]
        for _ in range(n - 1):
            w = w * w + c
            dist = np.abs(arr - w)
            dist[used] = np.inf
            j = int(np.argmin(dist))
            if not np.isfinite(dist[j]) or dist[j] > _MATCH_TOL * (1.0 + abs(w)):
                raise OrbitGroupingError(
                    f"iterate {w} of root {arr[i]} matches no unused root"
                )
            cycle.append(complex(arr[j]))
            used[j] = True
            w = arr[j]
        orbits.append(Orbit.from_points(c, cycle))
    if len(orbits) != expected:
        raise NonGenericParameterError(
            f"{len(orbits)} orbits of period {n} at c = {c}, expected {expected}"
        )
    return orbits


def initial_guesses(
    c: complex, n: int, cfg: RootConfig | None = None
) -> list[tuple[complex, complex, complex]]:
    """One (c, z, z') Newton start per period-n orbit of p_c.

    z is the canonical representative; orbits whose multiplier sits within
    1e-6 of 1 are dropped, since the c-chart value z' does not exist there.
    """
    roots = find_periodic_roots(c, n, cfg)
    orbits = group_into_orbits(c, roots, n)
    triples = []
    for orb in orbits:
        z = orb.representative
        if abs(multiplier(c, z, n) - 1.0) <= _PARABOLIC_SKIP:
            continue
        try:
            zp = periodic_point_derivative(c, z, n)
        except ParabolicChartError:
            continue
        triples.append((complex(c), z, zp))
    return triples
