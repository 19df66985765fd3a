import random
import sys
from pathlib import Path

import pytest

DATA = Path(__file__).parent / "data"

# Lines recorded by the acceptance suite, echoed after the run.
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture
def data_dir():
    return DATA


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


sys.path.insert(0, str(Path(__file__).parent))
