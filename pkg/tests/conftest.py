import numpy as np
import pytest
from hypothesis import strategies as st

from pdmetric import PersistenceDiagram


def random_diagram(rng, max_points=5, low=0.0, high=1.0, allow_empty=True):
    """Uniform points on the triangle low <= birth < death <= high."""
    n = rng.integers(0 if allow_empty else 1, max_points + 1)
    pts = np.sort(rng.uniform(low, high, size=(n, 2)), axis=1)
    pts = pts[pts[:, 0] < pts[:, 1]]
    return PersistenceDiagram(pts)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


coords = st.floats(min_value=-10.0, max_value=10.0, allow_nan=False, allow_infinity=False)


@st.composite
def diagrams(draw, max_size=5, with_multiplicity=False):
    n = draw(st.integers(min_value=0, max_value=max_size))
    pts, mult = [], []
    for _ in range(n):
        b = draw(coords)
        pers = draw(st.floats(min_value=1e-3, max_value=5.0))
        pts.append((b, b + pers))
        mult.append(draw(st.integers(1, 2)) if with_multiplicity else 1)
    return PersistenceDiagram(pts, mult if pts else None)


acceptance_key = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[acceptance_key] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(acceptance_key, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
