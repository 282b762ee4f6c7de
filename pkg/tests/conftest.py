import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from ghzhs.qstate import ghz_density, random_density  # noqa: E402

# criterion number -> (passed, description), filled by test_acceptance.py
ACCEPTANCE_RESULTS: dict[int, tuple[bool, str]] = {}

RANKS = (1, 2, 4, 8)


@pytest.fixture(scope="session")
def ghz():
    return ghz_density()


@pytest.fixture(scope="session")
def random_states():
    """100 seeded three-party states, 25 of each rank in RANKS."""
    return [random_density(1000 + i, 3, RANKS[i % 4]) for i in range(100)]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE_RESULTS):
        ok, desc = ACCEPTANCE_RESULTS[num]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {num:>2}: {desc}")
