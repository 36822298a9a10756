import os

import pytest
from hypothesis import HealthCheck, settings

from k3cls.classify import entries, load_reference
from k3cls.lattice import Lattice

settings.register_profile(
    "default", max_examples=60, deadline=None,
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def reference():
    return load_reference()


@pytest.fixture(scope="session")
def invariant_entries(reference):
    return entries(reference)


@pytest.fixture(scope="session")
def grams(invariant_entries):
    """``{(group_no, index): Lattice}`` for the 14 embedded lattices."""
    return {(e.group_no, e.index): Lattice(e.gram) for e in invariant_entries}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
