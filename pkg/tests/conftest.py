import contextlib
import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from subsetkconn.generate import EXAMPLE_TERMINALS, example_tree
from subsetkconn.graph import Graph

settings.register_profile(
    "repo",
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("repo")

# example-tree vertex names
R, V1, V2, V3, V4, T1, T2, T3, T4 = range(9)

ACCEPTANCE: dict[int, tuple[str, bool, str]] = {}


@contextlib.contextmanager
def criterion(number: int, title: str):
    """Record PASS/FAIL for one acceptance criterion around the checking code."""
    info = {"detail": ""}
    try:
        yield info
    except BaseException:
        ACCEPTANCE[number] = (title, False, info["detail"])
        raise
    ACCEPTANCE[number] = (title, True, info["detail"])


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        title, ok, detail = ACCEPTANCE[number]
        extra = f" ({detail})" if detail else ""
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'} {title}{extra}")


@pytest.fixture
def tree9():
    g, ts = example_tree()
    return g, ts


@st.composite
def graphs(draw, min_n=2, max_n=10, max_cost=9, density=None):
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    if density is None:
        mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    else:
        seed = draw(st.integers(0, 2**32 - 1))
        rng = random.Random(seed)
        mask = [rng.random() < density for _ in pairs]
    costs = draw(st.lists(st.integers(0, max_cost), min_size=len(pairs), max_size=len(pairs)))
    edges = [(u, v, c) for (u, v), keep, c in zip(pairs, mask, costs) if keep]
    return Graph(n, edges)


@st.composite
def graphs_with_terminals(draw, min_n=3, max_n=10, max_cost=9, min_t=2):
    g = draw(graphs(min_n=max(min_n, min_t), max_n=max_n, max_cost=max_cost))
    ts = draw(st.lists(st.integers(0, g.n - 1), min_size=min_t, max_size=g.n, unique=True))
    return g, tuple(sorted(ts))


def random_graph(rng: random.Random, n: int, p: float, max_cost: int = 9) -> Graph:
    return Graph(n, [(u, v, rng.randint(0, max_cost)) for u in range(n) for v in range(u + 1, n) if rng.random() < p])


__all__ = ["EXAMPLE_TERMINALS", "criterion", "graphs", "graphs_with_terminals", "random_graph"]
