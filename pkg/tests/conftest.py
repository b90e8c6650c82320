from __future__ import annotations

import pytest

_criteria: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" not in report.nodeid:
        return
    key = report.nodeid.split("test_criterion_")[1].split("_")[0]
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _criteria[key] = "PASS" if report.outcome == "passed" else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_criteria, key=int):
        terminalreporter.write_line(f"criterion {key}: {_criteria[key]}")


@pytest.fixture(scope="session")
def cubic():
    from cusppencil import catalog

    return catalog.get("cusp3").load()[0]
