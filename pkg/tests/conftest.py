"""Shared pytest wiring.

Collects one line per acceptance check (tests/test_acceptance.py) and
prints a PASS/FAIL summary block at the end of the run, so the criteria
can be audited at a glance without scrolling through the full log.
"""

import pytest

_ACCEPTANCE_LINES: list[tuple[str, str, float]] = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when != "call":
        return
    if item.fspath.basename != "test_acceptance.py":
        return
    doc = item.function.__doc__ or item.name
    label = doc.strip().splitlines()[0]
    status = "PASS" if report.passed else "FAIL"
    _ACCEPTANCE_LINES.append((label, status, report.duration))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_LINES:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for label, status, duration in _ACCEPTANCE_LINES:
        terminalreporter.write_line(f"{status}  {label}  [{duration:.1f}s]")
