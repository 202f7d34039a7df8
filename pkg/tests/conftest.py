import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from primecorr import build_prime_table, build_singular_series, build_weight_tables  # noqa: E402

_CRITERIA: dict[int, tuple[str, list[str]]] = {}


@pytest.fixture(scope="session")
def t6():
    return build_prime_table(10**6)


@pytest.fixture(scope="session")
def w6(t6):
    return build_weight_tables(t6)


@pytest.fixture(scope="session")
def ssv(t6):
    return build_singular_series(t6)


@pytest.fixture(scope="session")
def small():
    t = build_prime_table(10**4)
    return t, build_weight_tables(t)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    m = item.get_closest_marker("criterion")
    if m is not None and (rep.when == "call" or rep.failed):
        _CRITERIA.setdefault(m.args[0], (m.args[1], []))[1].append(rep.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        title, outcomes = _CRITERIA[num]
        ok = outcomes and all(o == "passed" for o in outcomes)
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {num}: {title}")
