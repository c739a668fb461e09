"""Collects acceptance outcomes and prints one pass/fail line per criterion."""

from collections import OrderedDict

import pytest

_OUTCOMES: "OrderedDict[int, dict]" = OrderedDict()


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    entry = _OUTCOMES.setdefault(number, {"title": title, "passed": True, "seen": False, "failed": []})
    if report.when == "call" or (report.when == "setup" and report.failed):
        entry["seen"] = True
        if not report.passed:
            entry["passed"] = False
            entry["failed"].append(item.name)


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_OUTCOMES):
        e = _OUTCOMES[number]
        if not e["seen"]:
            continue
        status = "PASS" if e["passed"] else "FAIL"
        extra = "" if e["passed"] else f"  ({', '.join(e['failed'])})"
        terminalreporter.write_line(f"criterion {number:2d} {status}  {e['title']}{extra}")
