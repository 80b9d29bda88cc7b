"""Shared fixtures and the acceptance summary printer.

Search results are expensive enough to share: one session-scoped cache maps
period -> (result set, config, wall seconds). The terminal summary prints
one PASS/FAIL line per acceptance criterion, aggregated over the tests of
tests/test_acceptance.py.
"""

import os
import re
import time

import pytest

from multcrit.analysis import annotate_membership
from multcrit.solver import SearchConfig, search

EXTENDED = os.environ.get("MULTCRIT_EXTENDED") == "1"

CRITERIA = {
    1: "counting bound row 3..10",
    2: "complete recovery n=3..6 within 60 s each",
    3: "n=7 complete in 30 min (n=8 extended)",
    4: "residual and minimal-period quality",
    5: "smallest critical-value moduli n=3..7",
    6: "c=0 record, scan periods, angle 1/9",
    7: "Mandelbrot membership percentages",
    8: "derivative property suite in 30 s",
    9: "root-finder partition oracle in 5 min",
    10: "set invariants and byte-stable output",
}

_results: dict[int, list[str]] = {}


class SearchCache:
    def __init__(self):
        self._store = {}

    def get(self, n: int):
        """(ResultSet, SearchConfig, wall seconds) for the default search."""
        if n not in self._store:
            cfg = SearchConfig()
            t0 = time.perf_counter()
            rs = search(n, cfg)
            dt = time.perf_counter() - t0
            annotate_membership(rs)
            self._store[n] = (rs, cfg, dt)
        return self._store[n]


@pytest.fixture(scope="session")
def search_cache():
    return SearchCache()


@pytest.fixture(scope="session")
def extended_enabled():
    return EXTENDED


def _criterion_of(nodeid: str):
    m = re.search(r"test_acceptance\.py::test_criterion_(\d+)", nodeid)
    return int(m.group(1)) if m else None


def pytest_runtest_logreport(report):
    num = _criterion_of(report.nodeid)
    if num is None:
        return
    if report.when == "call":
        _results.setdefault(num, []).append(report.outcome)
    elif report.when == "setup" and report.outcome == "skipped":
        _results.setdefault(num, []).append("skipped")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(CRITERIA):
        outcomes = _results.get(num)
        label = CRITERIA[num]
        if not outcomes:
            continue
        if "failed" in outcomes:
            status = "FAIL"
        elif all(o == "skipped" for o in outcomes):
            status = "SKIP"
        else:
            status = "PASS"
            if "skipped" in outcomes:
                label += " (extended piece skipped)"
        terminalreporter.write_line(f"criterion {num:2d} [{status}] {label}")
