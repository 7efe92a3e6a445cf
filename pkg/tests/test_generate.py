import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from subsetkconn.connectivity import subset_connectivity
from subsetkconn.errors import InputError
from subsetkconn.generate import EXAMPLE_EDGES, EXAMPLE_NAMES, EXAMPLE_TERMINALS, MODELS, GenSpec, generate


def test_example_tree_layout_is_the_example_tree():
    f = generate(GenSpec(model="padded-tree", layout="example-tree", k=1))
    assert f.n == 9 and f.k == 1
    assert f.terminals == [5, 6, 7, 8]
    assert {(u, v) for u, v, _ in f.edges} == set(EXAMPLE_EDGES)
    named = {frozenset((EXAMPLE_NAMES[u], EXAMPLE_NAMES[v])) for u, v in EXAMPLE_EDGES}
    expected = [("r", "v1"), ("r", "v2"), ("r", "v4"), ("v1", "t1"), ("v1", "t2"), ("v2", "v3"), ("v3", "t3"), ("v4", "t4")]
    assert named == {frozenset(e) for e in expected}
    assert subset_connectivity(f.graph(), EXAMPLE_TERMINALS) == 1


def test_tree_with_pool_keeps_tree_bought():
    f = generate(GenSpec(model="padded-tree", layout="example-tree", k=2, seed=1))
    assert set(f.purchased) == set(EXAMPLE_EDGES)
    assert subset_connectivity(f.graph(), f.terminals) >= 2


@pytest.mark.parametrize("model", MODELS)
def test_same_seed_same_bytes(model):
    spec = GenSpec(model=model, n=15, num_terminals=6, k=3, seed=42)
    assert generate(spec).dumps_text() == generate(spec).dumps_text()
    assert generate(spec).dumps_json() == generate(spec).dumps_json()


def test_geometric_n30_k3_is_feasible():
    f = generate(GenSpec(model="random-geometric", n=30, num_terminals=8, k=3, seed=7))
    assert subset_connectivity(f.graph(), f.terminals) >= 3


@settings(max_examples=60)
@given(
    st.sampled_from(MODELS),
    st.integers(8, 30),
    st.integers(2, 8),
    st.integers(1, 4),
    st.integers(0, 10**6),
    st.sampled_from(["uniform", "unit", "geometric"]),
)
def test_always_feasible(model, n, t, k, seed, cost):
    try:
        spec = GenSpec(model=model, n=n, num_terminals=t, k=k, seed=seed, cost=cost)
    except InputError:
        return
    f = generate(spec)
    assert subset_connectivity(f.graph(), f.terminals, k) >= k
    assert all(c >= 1 for _, _, c in f.edges)


def test_edge_cap_keeps_skeleton():
    f = generate(GenSpec(n=9, num_terminals=4, k=2, seed=3, max_edges=12, radius=0.9))
    assert len(f.edges) <= 12
    assert subset_connectivity(f.graph(), f.terminals) >= 2


@pytest.mark.parametrize(
    "kwargs",
    [
        {"model": "hypercube"},
        {"num_terminals": 1},
        {"n": 5, "num_terminals": 5, "k": 2},
        {"model": "power-of-k-core", "n": 4, "k": 4},
        {"layout": "example-tree"},
        {"cost": "gaussian"},
    ],
)
def test_inconsistent_specs_rejected(kwargs):
    with pytest.raises(InputError):
        GenSpec(**kwargs)


def test_skeleton_over_edge_cap_rejected():
    with pytest.raises(InputError):
        generate(GenSpec(n=12, num_terminals=8, k=3, max_edges=10))
