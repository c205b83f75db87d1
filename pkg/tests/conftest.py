import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

_RESULTS: dict[int, tuple[str, bool]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call":
        return
    number, title = mark.args
    _RESULTS[number] = (title, rep.passed)


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(_RESULTS):
        title, ok = _RESULTS[number]
        tr.write_line(f"{'✅ PASS' if ok else '❌ FAIL'}  {number:2d}. {title}")
    passed = sum(ok for _, ok in _RESULTS.values())
    tr.write_line(f"{passed}/{len(_RESULTS)} criteria pass")
