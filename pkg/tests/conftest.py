import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from growthcrit import fixtures  # noqa: E402


@pytest.fixture
def F2():
    return fixtures.free(2)


@pytest.fixture
def Z():
    return fixtures.integers(1)


@pytest.fixture
def Z2():
    return fixtures.integers(2)


@pytest.fixture
def H3():
    return fixtures.heisenberg()


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
