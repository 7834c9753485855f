import functools
import sys

import pytest
from hypothesis import strategies as st

from threerank.algebra import FieldCtx, Poly
from threerank.search import SearchConfig, run_search

QS = (5, 7, 11, 13)


CENSUS_KEYS: set = set()


@functools.lru_cache(maxsize=None)
def census(q, n, case):
    """Shared search results; each (q, n, case) is run once per session."""
    CENSUS_KEYS.add((q, n, case))
    return run_search(SearchConfig(FieldCtx(q), n, case))


def pytest_terminal_summary(terminalreporter):
    acc = sys.modules.get("test_acceptance")
    if acc is None or not acc.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in acc.RESULTS:
        terminalreporter.write_line(line)


@pytest.fixture(params=QS)
def ctx(request):
    return FieldCtx(request.param)


@pytest.fixture
def ctx5():
    return FieldCtx(5)


def polys(q, max_deg=6, nonzero=False):
    coeffs = st.lists(st.integers(0, q - 1), min_size=0, max_size=max_deg + 1)
    p = coeffs.map(lambda c: Poly(q, c))
    return p.filter(bool) if nonzero else p
