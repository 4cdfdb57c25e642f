import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import strategies as st

from kmdecomp.population import Population

sys.path.insert(0, str(Path(__file__).parent))

GRANULAR_AGES = (1, 2, 3, 4, 5, 6)
GRANULAR_EVENTS = (0, 1, 0, 1, 1, 0)
GRANULAR_CSV = "time,event\n" + "".join(f"{t},{d}\n" for t, d in zip(GRANULAR_AGES, GRANULAR_EVENTS))

_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def granular():
    return Population.from_arrays(GRANULAR_AGES, GRANULAR_EVENTS)


@pytest.fixture
def granular_csv(tmp_path):
    path = tmp_path / "granular.csv"
    path.write_text(GRANULAR_CSV)
    return path


@pytest.fixture
def report():
    return _ACCEPTANCE_LINES.append


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def random_populations(count, seed, max_n=12):
    """``count`` populations with n uniform in [1, max_n], coin-flip markers, distinct ages."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        n = int(rng.integers(1, max_n + 1))
        ages = rng.choice(np.arange(1, 1000), size=n, replace=False) / 10.0
        events = rng.integers(0, 2, size=n).astype(bool)
        out.append(Population.from_arrays(ages, events))
    return out


@st.composite
def populations(draw, min_n=1, max_n=12, ties=False):
    n = draw(st.integers(min_n, max_n))
    if ties:
        ages = draw(st.lists(st.integers(1, 5), min_size=n, max_size=n))
    else:
        ages = draw(st.lists(st.integers(1, 10_000), min_size=n, max_size=n, unique=True))
    ages = [a / 100 for a in ages]
    events = draw(st.lists(st.booleans(), min_size=n, max_size=n))
    return Population.from_arrays(ages, events)
