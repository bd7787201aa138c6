import random
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from ctp_outerplanar import RoadMap
from ctp_outerplanar.instances import random_outerplanar
from ctp_outerplanar.oracle import is_feasible

ACCEPTANCE = {}


def record(n, ok, detail):
    ACCEPTANCE[n] = (ok, detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")


@st.composite
def road_maps(draw, max_n=10, weights="unit"):
    """A random 2-connected outerplanar road map with a feasible blockage set."""
    n = draw(st.integers(3, max_n))
    seed = draw(st.integers(0, 10**6))
    g, emb = random_outerplanar(n, seed, weights)
    s = f"v{draw(st.integers(0, n - 1))}"
    t = f"v{draw(st.integers(0, n - 1).filter(lambda i: f'v{i}' != s))}"
    edges = sorted(g.edges)
    rng = random.Random(draw(st.integers(0, 10**6)))
    blocked = set()
    for e in rng.sample(edges, rng.randint(0, len(edges))):
        if is_feasible(g, s, t, blocked | {e}):
            blocked.add(e)
    return RoadMap(g, emb, s, t, frozenset(blocked))


@pytest.fixture
def eps():
    return Fraction(1, 100)
