"""Result persistence and document-level verification.

JSON is the canonical store: nested orbits round-trip losslessly because
floats are emitted with shortest round-trip repr (17 significant digits at
most). CSV is a flat export for spreadsheets and loses the orbit lists.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .dynamics import multiplier_critical_bound
from .errors import DocumentFormatError, VerificationRejected
from .periodic import Orbit
from .solver import (
    CriticalPointRecord,
    ResultSet,
    SearchConfig,
    SystemState,
    orbit_distance,
    verify_solution,
)

SCHEMA_VERSION = "1"

CSV_COLUMNS = (
    "period",
    "c_re",
    "c_im",
    "z_re",
    "z_im",
    "zp_re",
    "zp_im",
    "lambda_re",
    "lambda_im",
    "lambda_abs",
    "residual",
    "inside_mandelbrot",
)


@dataclass
class ResultDocument:
    schema_version: str
    period: int
    bound: int
    complete: bool
    seed: int
    tolerance: float
    records: list[CriticalPointRecord] = field(default_factory=list)

    @classmethod
    def from_result_set(cls, rs: ResultSet, cfg: SearchConfig) -> "ResultDocument":
        return cls(
            schema_version=SCHEMA_VERSION,
            period=rs.period,
            bound=rs.bound,
            complete=rs.complete,
            seed=cfg.seed,
            tolerance=cfg.tol,
            records=list(rs.records),
        )

    def to_result_set(self, dedup_delta: float = 1e-6) -> ResultSet:
        return ResultSet(
            period=self.period,
            records=list(self.records),
            bound=self.bound,
            complete=self.complete,
            dedup_delta=dedup_delta,
        )


def _pair(w: complex) -> list[float]:
    return [w.real, w.imag]


def _record_obj(r: CriticalPointRecord, index_of: dict[int, int]) -> dict:
    partner = r.conjugate_partner
    return {
        "c": _pair(r.c),
        "z": _pair(r.z),
        "zp": _pair(r.zp),
        "lambda": _pair(r.lam),
        "lambda_abs": r.lambda_abs,
        "residual": r.residual,
        "orbit": [_pair(w) for w in r.orbit.points],
        "inside_mandelbrot": r.inside_mandelbrot,
        "is_real": r.is_real,
        "conjugate_partner": index_of.get(id(partner)) if partner is not None else None,
    }


def serialize_json(doc: ResultDocument) -> str:
    """Canonical JSON text: fixed key order, LF lines, byte-stable floats."""
    index_of = {id(r): i for i, r in enumerate(doc.records)}
    obj = {
        "schema_version": doc.schema_version,
        "period": doc.period,
        "bound": doc.bound,
        "complete": doc.complete,
        "seed": doc.seed,
        "tolerance": doc.tolerance,
        "records": [_record_obj(r, index_of) for r in doc.records],
    }
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def _want(obj: dict, key: str, kinds, path: str):
    if key not in obj:
        raise DocumentFormatError(f"{path}: missing field '{key}'")
    v = obj[key]
    if not isinstance(v, kinds) or isinstance(v, bool) and bool not in (
        kinds if isinstance(kinds, tuple) else (kinds,)
    ):
        raise DocumentFormatError(f"{path}.{key}: unexpected type {type(v).__name__}")
    return v


def _complex_at(v, path: str) -> complex:
    if (
        not isinstance(v, list)
        or len(v) != 2
        or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in v)
    ):
        raise DocumentFormatError(f"{path}: expected [re, im] pair")
    w = complex(float(v[0]), float(v[1]))
    if not (math.isfinite(w.real) and math.isfinite(w.imag)):
        raise DocumentFormatError(f"{path}: non-finite value")
    return w


def parse_json(text: str) -> ResultDocument:
    """Parse a document, with field-path diagnostics on malformed input."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentFormatError(
            f"line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(obj, dict):
        raise DocumentFormatError("top level: expected an object")
    version = _want(obj, "schema_version", str, "top level")
    if version != SCHEMA_VERSION:
        raise DocumentFormatError(f"schema_version: unsupported '{version}'")
    period = _want(obj, "period", int, "top level")
    if period < 1:
        raise DocumentFormatError(f"period: must be positive, got {period}")
    bound = _want(obj, "bound", int, "top level")
    complete = _want(obj, "complete", bool, "top level")
    seed = _want(obj, "seed", int, "top level")
    tolerance = _want(obj, "tolerance", (int, float), "top level")
    raw_records = _want(obj, "records", list, "top level")
    records: list[CriticalPointRecord] = []
    partners: list[int | None] = []
    for i, ro in enumerate(raw_records):
        path = f"records[{i}]"
        if not isinstance(ro, dict):
            raise DocumentFormatError(f"{path}: expected an object")
        c = _complex_at(_want(ro, "c", list, path), f"{path}.c")
        z = _complex_at(_want(ro, "z", list, path), f"{path}.z")
        zp = _complex_at(_want(ro, "zp", list, path), f"{path}.zp")
        lam = _complex_at(_want(ro, "lambda", list, path), f"{path}.lambda")
        lam_abs = float(_want(ro, "lambda_abs", (int, float), path))
        residual = float(_want(ro, "residual", (int, float), path))
        orbit_raw = _want(ro, "orbit", list, path)
        if len(orbit_raw) != period:
            raise DocumentFormatError(
                f"{path}.orbit: expected {period} points, got {len(orbit_raw)}"
            )
        pts = [_complex_at(p, f"{path}.orbit[{j}]") for j, p in enumerate(orbit_raw)]
        inside = ro.get("inside_mandelbrot")
        if inside is not None and not isinstance(inside, bool):
            raise DocumentFormatError(f"{path}.inside_mandelbrot: expected bool or null")
        is_real = _want(ro, "is_real", bool, path)
        partner = ro.get("conjugate_partner")
        if partner is not None and (isinstance(partner, bool) or not isinstance(partner, int)):
            raise DocumentFormatError(f"{path}.conjugate_partner: expected index or null")
        records.append(
            CriticalPointRecord(
                period=period,
                c=c,
                z=z,
                zp=zp,
                lam=lam,
                lambda_abs=lam_abs,
                residual=residual,
                orbit=Orbit.from_points(c, pts),
                inside_mandelbrot=inside,
                is_real=is_real,
            )
        )
        partners.append(partner)
    for i, p in enumerate(partners):
        if p is None:
            continue
        if not 0 <= p < len(records) or p == i:
            raise DocumentFormatError(f"records[{i}].conjugate_partner: bad index {p}")
        records[i].conjugate_partner = records[p]
    return ResultDocument(
        schema_version=version,
        period=period,
        bound=bound,
        complete=complete,
        seed=seed,
        tolerance=float(tolerance),
        records=records,
    )


def write_document(doc: ResultDocument, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(serialize_json(doc))


def read_document(path: str) -> ResultDocument:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_json(fh.read())


def to_csv(doc: ResultDocument) -> str:
    """Flat export; orbit lists and partner links are dropped."""
    lines = [",".join(CSV_COLUMNS)]
    for r in doc.records:
        flag = "" if r.inside_mandelbrot is None else str(r.inside_mandelbrot).lower()
        lines.append(
            ",".join(
                [
                    str(r.period),
                    repr(r.c.real),
                    repr(r.c.imag),
                    repr(r.z.real),
                    repr(r.z.imag),
                    repr(r.zp.real),
                    repr(r.zp.imag),
                    repr(r.lam.real),
                    repr(r.lam.imag),
                    repr(r.lambda_abs),
                    repr(r.residual),
                    flag,
                ]
            )
        )
    return "\n".join(lines) + "\n"


@dataclass
class VerifyReport:
    checked: int
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def verify_document(doc: ResultDocument, cfg: SearchConfig | None = None) -> VerifyReport:
    """Re-derive every record and re-check the set invariants.

    Each record goes back through the solution verifier at the document's
    stated tolerance; on top of that the set must be duplicate-free, sorted
    canonically, closed under conjugation, and within the counting bound.
    """
    cfg = cfg or SearchConfig(tol=max(doc.tolerance, 1e-12))
    rep = VerifyReport(checked=len(doc.records))
    if doc.bound != multiplier_critical_bound(doc.period):
        rep.failures.append(
            f"bound {doc.bound} != counting bound "
            f"{multiplier_critical_bound(doc.period)} for period {doc.period}"
        )
    if doc.complete and len(doc.records) != doc.bound:
        rep.failures.append(
            f"complete=true but {len(doc.records)} records != bound {doc.bound}"
        )
    if len(doc.records) > doc.bound:
        rep.failures.append(f"{len(doc.records)} records exceed bound {doc.bound}")
    keys = [r.sort_key() for r in doc.records]
    if keys != sorted(keys):
        rep.failures.append("records are not in canonical sort order")
    delta = cfg.dedup_delta
    for i, r in enumerate(doc.records):
        try:
            fresh = verify_solution(SystemState(r.c, r.z, r.zp), doc.period, cfg)
        except VerificationRejected as exc:
            rep.failures.append(f"record {i}: {exc}")
            continue
        if abs(fresh.lam - r.lam) > 1e-8 * max(1.0, abs(r.lam)):
            rep.failures.append(f"record {i}: stored multiplier disagrees on re-check")
        if abs(fresh.lambda_abs - r.lambda_abs) > 1e-8 * max(1.0, r.lambda_abs):
            rep.failures.append(f"record {i}: stored lambda_abs disagrees on re-check")
        if r.is_real != (abs(r.c.imag) < delta):
            rep.failures.append(f"record {i}: is_real flag disagrees with im c")
    for i, r in enumerate(doc.records):
        for j in range(i + 1, len(doc.records)):
            s = doc.records[j]
            if s.c.real - r.c.real >= delta:
                break
            if abs(s.c - r.c) < delta and orbit_distance(r.orbit, s.orbit) < delta:
                rep.failures.append(f"records {i} and {j}: duplicates under dedup metric")
    for i, r in enumerate(doc.records):
        if r.is_real:
            continue
        cbar = r.c.conjugate()
        mirrored = [w.conjugate() for w in r.orbit.points]
        mirror_orbit = Orbit.from_points(cbar, mirrored)
        found = any(
            abs(s.c - cbar) < delta and orbit_distance(mirror_orbit, s.orbit) < delta
            for s in doc.records
        )
        if not found:
            rep.failures.append(f"record {i}: conjugate partner missing from the set")
    return rep
