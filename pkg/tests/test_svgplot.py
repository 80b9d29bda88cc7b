"""Plot rendering checks: determinism, marker placement, raster sanity."""

import re

from multcrit.io import ResultDocument, parse_json, serialize_json
from multcrit.svgplot import render_svg, write_svg

_CROSS = 'stroke="#1f77b4"'
_DISC = '<circle cx='


def _doc(search_cache, n=3):
    rs, cfg, _ = search_cache.get(n)
    return ResultDocument.from_result_set(rs, cfg)


def test_render_deterministic(search_cache):
    doc = _doc(search_cache)
    assert render_svg(doc) == render_svg(doc)


def test_header_and_size(search_cache):
    svg = render_svg(_doc(search_cache))
    assert svg.startswith("<svg")
    assert 'xmlns="http://www.w3.org/2000/svg"' in svg
    assert 'width="560"' in svg and 'height="520"' in svg
    assert svg.rstrip().endswith("</svg>")


def test_marker_counts_match_membership(search_cache):
    # every period-3 critical point lies outside the connectedness locus,
    # so markers must all be crosses and there must be one per record
    doc = _doc(search_cache, 3)
    assert all(r.inside_mandelbrot is False for r in doc.records)
    svg = render_svg(doc)
    assert svg.count(_CROSS) == len(doc.records)
    assert svg.count(_DISC) == 0


def test_inside_markers_appear_for_period_5(search_cache):
    doc = _doc(search_cache, 5)
    n_in = sum(1 for r in doc.records if r.inside_mandelbrot)
    n_out = len(doc.records) - n_in
    svg = render_svg(doc)
    assert n_in > 0
    assert svg.count(_DISC) == n_in
    assert svg.count(_CROSS) == n_out


def test_conjugate_markers_mirror(search_cache):
    # the two period-3 points are conjugates, so their marker rows must be
    # symmetric about the real-axis pixel row (1.3 / 0.005 = 260); the path
    # anchor sits 3 px above each center, hence the sum 520 - 6
    svg = render_svg(_doc(search_cache, 3))
    rows = [float(m.group(2)) for m in re.finditer(r'd="M (\S+) (\S+) L', svg)]
    assert len(rows) == 2
    assert abs(rows[0] + rows[1] - 514.0) < 0.021


def test_raster_runs_present(search_cache):
    svg = render_svg(_doc(search_cache))
    assert svg.count("<rect") > 520  # at least one run per row plus background
    assert 'fill="#000000"' in svg  # interior of the set shows up


def test_membership_computed_when_unset(search_cache):
    doc = _doc(search_cache, 3)
    reference = render_svg(doc)
    copy = parse_json(serialize_json(doc))
    for r in copy.records:
        r.inside_mandelbrot = None
    assert render_svg(copy) == reference


def test_write_svg(tmp_path, search_cache):
    path = tmp_path / "out.svg"
    write_svg(_doc(search_cache), str(path))
    raw = path.read_bytes()
    assert raw.startswith(b"<svg")
    assert raw.endswith(b"</svg>\n")
    assert b"\r" not in raw
