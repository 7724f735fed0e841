import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_criteria = {}


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None or call.when != "call":
        return
    number, title = marker.args
    failed = _criteria.setdefault(number, (title, []))[1]
    if call.excinfo is not None:
        failed.append(item.name)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, failed = _criteria[number]
        status = f"FAIL  {title} ({', '.join(failed)})" if failed else f"PASS  {title}"
        terminalreporter.write_line(f"AC{number} {status}")


@pytest.fixture(scope="session")
def quad():
    from ssop import QuadratureSpec
    return QuadratureSpec()
