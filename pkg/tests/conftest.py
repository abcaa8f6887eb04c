import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from hallorbits import GL, PermGroup, reset_caps  # noqa: E402
from hallorbits.harness import load_corpus  # noqa: E402

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(autouse=True)
def _fresh_caps():
    reset_caps()
    yield
    reset_caps()


@pytest.fixture(scope="session")
def corpus():
    return load_corpus()


@pytest.fixture(scope="session")
def gl23():
    return GL(2, 3)


@pytest.fixture(scope="session")
def s4():
    return PermGroup(["(0 1 2 3)", "(0 1)"], n=4)


@pytest.fixture(scope="session")
def a5():
    return PermGroup(["(0 1 2 3 4)", "(0 1 2)"], n=5)
