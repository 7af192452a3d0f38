import random

import pytest

from wassmono.fuzz import random_measure

# one summary line per acceptance criterion, filled in by test_acceptance.py
CRITERIA: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(CRITERIA, key=lambda k: (int("".join(c for c in k if c.isdigit())), k)):
        terminalreporter.write_line(CRITERIA[key])


@pytest.fixture
def rng():
    return random.Random(20240611)


def measure_pair(rng, max_support=8, lo=-10, hi=10):
    return random_measure(rng, max_support, lo, hi), random_measure(rng, max_support, lo, hi)
