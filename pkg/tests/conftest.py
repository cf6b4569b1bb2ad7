import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from annealmax.setfn import HypergraphCut, random_instance, tight_example

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def tight():
    return tight_example()


def single_edge(w=1.0):
    return HypergraphCut.from_digraph(2, [(0, 1, w)])


@st.composite
def oracles(draw, max_n=8):
    kind = draw(st.sampled_from(["digraph-cut", "coverage"]))
    n = draw(st.integers(2, max_n))
    seed = draw(st.integers(0, 10_000))
    density = 0.4 if kind == "digraph-cut" else 0.3
    return random_instance(kind, n, density, (1, 10), seed=seed)


@st.composite
def oracle_and_point(draw, max_n=8):
    f = draw(oracles(max_n))
    x = np.array(draw(st.lists(st.floats(0, 1), min_size=f.n, max_size=f.n)))
    return f, x
