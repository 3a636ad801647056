import numpy as np
import pytest

from logkmeans import build_prefix_sums, sort_and_align
from logkmeans.core import SortedInput


def prepare(values, weights=None):
    data = sort_and_align(values, weights)
    return data, build_prefix_sums(data)


def prepare_sorted(values, weights=None):
    data = SortedInput.from_sorted(values, weights)
    return data, build_prefix_sums(data)


@pytest.fixture
def four_points():
    """The running example: two tight pairs far apart."""
    return prepare_sorted([0.0, 1.0, 9.0, 10.0])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
