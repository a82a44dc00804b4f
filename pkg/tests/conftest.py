import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

DATA = Path(__file__).parent / "data"

_criteria: dict[str, list[str]] = {}
_outcomes: dict[str, list[str]] = {}


def pytest_collection_modifyitems(items):
    for item in items:
        marker = item.get_closest_marker("acceptance")
        if marker:
            _criteria.setdefault(marker.args[0], []).append(item.nodeid)


def pytest_runtest_logreport(report):
    for label, nodeids in _criteria.items():
        if report.nodeid not in nodeids:
            continue
        if report.when == "call" or report.skipped or report.failed:
            _outcomes.setdefault(label, []).append(
                "skipped" if report.skipped else ("failed" if report.failed else "passed")
            )


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_criteria):
        outcomes = _outcomes.get(label, [])
        if not outcomes:
            status = "NOT RUN"
        elif "failed" in outcomes:
            status = "FAIL"
        elif all(o == "skipped" for o in outcomes):
            status = "SKIP"
        else:
            status = "PASS"
        detail = ", ".join(f"{outcomes.count(o)} {o}" for o in ("passed", "failed", "skipped") if o in outcomes)
        terminalreporter.write_line(f"{status:7} {label} ({detail})")


@pytest.fixture
def example1_scores():
    return (10, 10, 9, 8, 6, 3, 3, 0)


@pytest.fixture
def data_dir():
    return DATA
