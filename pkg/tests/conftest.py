import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from moran2locus.model import Parameters  # noqa: E402

THEOREM_CHECK = Parameters(100_000, 10 ** -3.75, 0.1, 10 ** -2.5)

_CRITERIA_LINES = []


def record_criterion(line: str) -> None:
    """Register a one-line acceptance verdict for the end-of-run summary."""
    _CRITERIA_LINES.append(line)
    print(line)


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running Monte Carlo test")


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_CRITERIA_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def theorem_params():
    return THEOREM_CHECK
