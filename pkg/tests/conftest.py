import math

import numpy as np
import pytest
from hypothesis import strategies as st

from hmercer.sequences import SampleSequence, WeightVector


def random_scenario(rng: np.random.Generator, n_range=(2, 8), lo=0.1, hi=10.0):
    """Log-uniform weights in [1e-3, 1] and sorted points in [lo, hi]."""
    n = int(rng.integers(n_range[0], n_range[1] + 1))
    w = np.exp(rng.uniform(math.log(1e-3), 0.0, n))
    x = np.sort(rng.uniform(lo, hi, n))
    return WeightVector(tuple(w)), SampleSequence(tuple(x), (lo, hi))


@st.composite
def scenarios(draw, min_n=2, max_n=8, lo=0.1, hi=10.0, sort=True):
    n = draw(st.integers(min_n, max_n))
    w = draw(st.lists(st.floats(1e-3, 1.0), min_size=n, max_size=n))
    x = draw(st.lists(st.floats(lo, hi), min_size=n, max_size=n))
    if sort:
        x = sorted(x)
    return WeightVector(tuple(w)), SampleSequence(tuple(x), (lo, hi))


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)
