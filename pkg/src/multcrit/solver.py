"""Three-dimensional Newton solver and randomized search for critical points.

The unknowns are (c, z, z'). The system is

    F1 = p^n(z) - z
    F2 = z' (1 - d/dz p^n) - d/dc p^n
    F3 = d(lambda)/dc  (chain-rule form)

F2 is the polynomial clearing of the divided chart formula: same zero set
away from parabolic points, but entire, so the Jacobian never sees a pole.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field

import numpy as np

from .dynamics import multiplier_critical_bound, orbit_jet
from .errors import (
    BoundOverflowError,
    IncompleteRootsError,
    InconsistentRootError,
    JetOverflowError,
    NonGenericParameterError,
    OrbitGroupingError,
    SolveFailed,
    VerificationRejected,
)
from .periodic import Orbit, RootConfig, initial_guesses, minimal_period

_COND_LIMIT = 1e12
_ESCAPE_C = 100.0
_PARABOLIC_MIN = 1e-6
_MAX_HALVINGS = 8


@dataclass(frozen=True)
class SystemState:
    """A point (c, z, z') of the search space."""

    c: complex
    z: complex
    zp: complex

    def finite(self) -> bool:
        return all(
            math.isfinite(w.real) and math.isfinite(w.imag)
            for w in (self.c, self.z, self.zp)
        )


@dataclass(frozen=True)
class SearchConfig:
    tol: float = 1e-10
    max_newton_iters: int = 50
    budget: int | None = None  # None means 10000 * n
    seed: int = 0
    dedup_delta: float = 1e-6
    sample_radius: float = 2.0
    root_cfg: RootConfig = field(default_factory=RootConfig)

    def __post_init__(self):
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.max_newton_iters < 1:
            raise ValueError("max_newton_iters must be >= 1")
        if self.budget is not None and self.budget < 1:
            raise ValueError("budget must be >= 1")


@dataclass(eq=False)
class CriticalPointRecord:
    """One verified solution of the critical-point system."""

    period: int
    c: complex
    z: complex
    zp: complex
    lam: complex
    lambda_abs: float
    residual: float
    orbit: Orbit
    inside_mandelbrot: bool | None = None
    is_real: bool = False
    conjugate_partner: "CriticalPointRecord | None" = field(
        default=None, repr=False
    )

    def sort_key(self):
        return (self.c.real, self.c.imag, self.z.real, self.z.imag)


@dataclass
class ResultSet:
    """Deduplicated, conjugation-closed solutions for one period."""

    period: int
    records: list[CriticalPointRecord] = field(default_factory=list)
    bound: int = 0
    complete: bool = False
    guesses_used: int = 0
    samples_used: int = 0
    dedup_delta: float = 1e-6

    @classmethod
    def empty(cls, period: int, dedup_delta: float = 1e-6) -> "ResultSet":
        return cls(
            period=period,
            bound=multiplier_critical_bound(period),
            dedup_delta=dedup_delta,
        )


def _scale(s: SystemState) -> float:
    return 1.0 + abs(s.c) + abs(s.z)


def _system(s: SystemState, n: int):
    """Residual vector and Jacobian from a single jet evaluation."""
    jet = orbit_jet(s.c, s.z, n)
    f = np.array(
        [
            jet.v - s.z,
            s.zp * (1.0 - jet.d_z) - jet.d_c,
            jet.d_zz * s.zp + jet.d_zc,
        ],
        dtype=np.complex128,
    )
    jac = np.array(
        [
            [jet.d_c, jet.d_z - 1.0, 0.0],
            [
                -s.zp * jet.d_zc - jet.d_cc,
                -s.zp * jet.d_zz - jet.d_zc,
                1.0 - jet.d_z,
            ],
            [
                jet.d_zcc + s.zp * jet.d_zzc,
                jet.d_zzc + s.zp * jet.d_zzz,
                jet.d_zz,
            ],
        ],
        dtype=np.complex128,
    )
    return f, jac


def residual(s: SystemState, n: int) -> tuple[complex, complex, complex]:
    """The three residuals (F1, F2, F3) of the critical-point system."""
    f, _ = _system(s, n)
    return complex(f[0]), complex(f[1]), complex(f[2])


def jacobian(s: SystemState, n: int) -> np.ndarray:
    """3x3 matrix of the partials of (F1, F2, F3) w.r.t. (c, z, z')."""
    _, jac = _system(s, n)
    return jac


def _sup(f: np.ndarray) -> float:
    return float(np.max(np.abs(f)))


def newton_solve(s0: SystemState, n: int, cfg: SearchConfig) -> SystemState:
    """Newton iteration on the system; raises SolveFailed on any dead end.

    Plain Newton steps, with up to 8 step halvings whenever the full step
    would increase the residual sup-norm; the best candidate is taken so
    the iteration never stalls in place.
    """
    s = s0
    if not s.finite():
        raise SolveFailed("divergence", "non-finite start state")
    try:
        f, jac = _system(s, n)
    except JetOverflowError:
        raise SolveFailed("divergence", "overflow at start state")
    for _ in range(cfg.max_newton_iters):
        res = _sup(f)
        if res < cfg.tol * _scale(s):
            return s
        if not np.all(np.isfinite(jac.view(np.float64))):
            raise SolveFailed("divergence", "non-finite Jacobian")
        try:
            inv = np.linalg.inv(jac)
        except np.linalg.LinAlgError:
            raise SolveFailed("singular-jacobian", "exactly singular Jacobian")
        cond = float(
            np.max(np.sum(np.abs(jac), axis=1)) * np.max(np.sum(np.abs(inv), axis=1))
        )
        if not math.isfinite(cond) or cond > _COND_LIMIT:
            raise SolveFailed("singular-jacobian", f"condition estimate {cond:.2e}")
        full = inv @ f
        best = None
        step = full
        for _ in range(_MAX_HALVINGS + 1):
            cand = SystemState(
                s.c - complex(step[0]), s.z - complex(step[1]), s.zp - complex(step[2])
            )
            if cand.finite():
                try:
                    fc, jc = _system(cand, n)
                except JetOverflowError:
                    fc = jc = None
                if fc is not None and np.all(np.isfinite(fc.view(np.float64))):
                    rc = _sup(fc)
                    if best is None or rc < best[0]:
                        best = (rc, cand, fc, jc)
                    if rc < res:
                        break
            step = step / 2.0
        if best is None:
            raise SolveFailed("divergence", "all step candidates overflowed")
        _, s, f, jac = best
        if abs(s.c) > _ESCAPE_C:
            raise SolveFailed("divergence", f"|c| = {abs(s.c):.1f} escaped")
    if _sup(f) < cfg.tol * _scale(s):
        return s
    raise SolveFailed(
        "no-converge", f"residual {_sup(f):.2e} after {cfg.max_newton_iters} iterations"
    )


def verify_solution(
    s: SystemState, n: int, cfg: SearchConfig
) -> CriticalPointRecord:
    """Promote a converged state to a record, or reject it.

    Rejection reasons: the periodic point may actually have a lower exact
    period (the period-n curve contains all divisor-period loci), the orbit
    may be parabolic, or the residual may fail the tolerance on re-check.
    """
    f, _ = _system(s, n)
    res = _sup(f)
    if res > cfg.tol * _scale(s):
        raise VerificationRejected(
            "residual-too-large", f"sup-norm {res:.2e} at scale {_scale(s):.2f}"
        )
    if minimal_period(s.c, s.z, n) != n:
        raise VerificationRejected("wrong-period")
    jet = orbit_jet(s.c, s.z, n)
    lam = jet.d_z
    if abs(lam - 1.0) <= _PARABOLIC_MIN:
        raise VerificationRejected("parabolic")
    pts = [s.z]
    w = s.z
    for _ in range(n - 1):
        w = w * w + s.c
        pts.append(w)
    orbit = Orbit.from_points(s.c, pts)
    return CriticalPointRecord(
        period=n,
        c=s.c,
        z=s.z,
        zp=s.zp,
        lam=lam,
        lambda_abs=abs(lam),
        residual=res,
        orbit=orbit,
        is_real=abs(s.c.imag) < cfg.dedup_delta,
    )


def conjugate_record(r: CriticalPointRecord) -> CriticalPointRecord:
    """Mirror a record across the real axis.

    The system commutes with complex conjugation and IEEE arithmetic is
    sign-symmetric, so every derived quantity of the mirror record is the
    exact conjugate; the residual carries over unchanged.
    """
    cbar = r.c.conjugate()
    pts = [w.conjugate() for w in r.orbit.points]
    return CriticalPointRecord(
        period=r.period,
        c=cbar,
        z=r.z.conjugate(),
        zp=r.zp.conjugate(),
        lam=r.lam.conjugate(),
        lambda_abs=r.lambda_abs,
        residual=r.residual,
        orbit=Orbit.from_points(cbar, pts),
        inside_mandelbrot=r.inside_mandelbrot,
        is_real=r.is_real,
    )


def orbit_distance(a: Orbit, b: Orbit) -> float:
    """max over a's points of the distance to the nearest point of b."""
    return max(min(abs(pa - pb) for pb in b.points) for pa in a.points)


def _duplicate_of(rs: ResultSet, rec: CriticalPointRecord):
    delta = rs.dedup_delta
    keys = [r.sort_key() for r in rs.records]
    lo = bisect_left(keys, (rec.c.real - delta,))
    hi = bisect_right(keys, (rec.c.real + delta, math.inf, math.inf, math.inf))
    for r in rs.records[lo:hi]:
        if abs(r.c - rec.c) < delta and orbit_distance(rec.orbit, r.orbit) < delta:
            return r
    return None


def dedup_insert(rs: ResultSet, rec: CriticalPointRecord) -> bool:
    """Insert unless an existing record matches in c and orbit.

    Distinct orbits at the same c are kept apart by the orbit distance.
    The list stays sorted by (re c, im c, re z, im z). Inserting a genuine
    new record past the counting bound means the dedup metric or the
    tolerances are broken, and raises.
    """
    if _duplicate_of(rs, rec) is not None:
        return False
    if len(rs.records) >= rs.bound:
        raise BoundOverflowError(
            f"period {rs.period}: insert would exceed bound {rs.bound}"
        )
    keys = [r.sort_key() for r in rs.records]
    rs.records.insert(bisect_left(keys, rec.sort_key()), rec)
    return True


def search(
    n: int, cfg: SearchConfig | None = None, resume: list[CriticalPointRecord] | None = None
) -> ResultSet:
    """Randomized sweep for all critical points of the period-n multiplier.

    Samples c uniformly on the disc, builds one Newton start per orbit,
    solves, verifies, and inserts each solution together with its complex
    conjugate (real solutions enter once). Stops at the counting bound or
    when the sample budget is spent. Deterministic for a fixed seed.

    `resume` seeds the set with previously found records (re-deduplicated),
    so long runs can be restarted without losing work.
    """
    cfg = cfg or SearchConfig()
    if n < 3 or n > 12:
        raise ValueError(f"search supports periods 3..12, got {n}")
    budget = cfg.budget if cfg.budget is not None else 10000 * n
    rs = ResultSet.empty(n, dedup_delta=cfg.dedup_delta)
    for old in resume or []:
        if old.period != n:
            raise ValueError(f"resume record has period {old.period}, expected {n}")
        dedup_insert(rs, old)
    rng = np.random.default_rng(cfg.seed)
    while len(rs.records) < rs.bound and rs.samples_used < budget:
        u, v = rng.random(), rng.random()
        c = cfg.sample_radius * math.sqrt(u) * complex(
            math.cos(2.0 * math.pi * v), math.sin(2.0 * math.pi * v)
        )
        rs.samples_used += 1
        try:
            guesses = initial_guesses(c, n, cfg.root_cfg)
        except (
            IncompleteRootsError,
            NonGenericParameterError,
            OrbitGroupingError,
            InconsistentRootError,
        ):
            continue
        for c0, z0, zp0 in guesses:
            if len(rs.records) >= rs.bound:
                break
            rs.guesses_used += 1
            try:
                state = newton_solve(SystemState(c0, z0, zp0), n, cfg)
            except SolveFailed:
                continue
            try:
                rec = verify_solution(state, n, cfg)
            except (VerificationRejected, InconsistentRootError):
                continue
            if not dedup_insert(rs, rec):
                continue
            if not rec.is_real:
                mirror = conjugate_record(rec)
                if not dedup_insert(rs, mirror):
                    raise BoundOverflowError(
                        "conjugate of a fresh record was already present"
                    )
                rec.conjugate_partner = mirror
                mirror.conjugate_partner = rec
    rs.complete = len(rs.records) == rs.bound
    return rs
