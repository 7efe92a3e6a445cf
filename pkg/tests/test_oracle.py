import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import graphs_with_terminals, random_graph
from reference import min_cost_subset, subset_conn
from subsetkconn.errors import SizeLimitError
from subsetkconn.graph import Graph
from subsetkconn.oracle import brute_force_subset_optimum, verify_solution


def test_zero_cost_feasible_subgraph():
    g = Graph(4, [(0, 1, 0), (1, 2, 0), (2, 3, 0), (0, 3, 5)])
    assert brute_force_subset_optimum(g, [0, 3], 1)[0] == 0


def test_single_pair_is_shortest_path():
    g = Graph(4, [(0, 1, 2), (1, 3, 2), (0, 2, 1), (2, 3, 1), (0, 3, 7)])
    cost, edges = brute_force_subset_optimum(g, [0, 3], 1)
    assert cost == 2 and edges == {(0, 2), (2, 3)}


def test_infeasible_returns_none():
    assert brute_force_subset_optimum(Graph(3, [(0, 1, 1)]), [0, 2], 1) is None


def test_refuses_large_instances():
    g = Graph(8, [(u, v, 1) for u in range(8) for v in range(u + 1, 8)])
    with pytest.raises(SizeLimitError):
        brute_force_subset_optimum(g, [0, 1], 1)


def test_verify_full_and_empty(tree9):
    g, ts = tree9
    assert verify_solution(g, ts, 1, g.edge_set).passed
    cert = verify_solution(g, ts, 1, ())
    assert not cert.passed and cert.witness == (ts[0], ts[1])
    assert cert.min_connectivity == 0


@settings(max_examples=50)
@given(graphs_with_terminals(min_n=3, max_n=6), st.integers(1, 2))
def test_matches_plain_enumeration(gt, k):
    g, ts = gt
    if g.num_edges > 11:
        return
    found = brute_force_subset_optimum(g, ts, k)
    exact = min_cost_subset(g, lambda h: subset_conn(h, ts) >= k)
    assert (found is None) == (exact is None)
    if found is not None:
        assert found[0] == exact
        assert subset_conn(g.subgraph(found[1]), ts) >= k


def test_two_orders_agree():
    rng = random.Random(5)
    done = 0
    while done < 40:
        n = rng.randint(5, 9)
        g = random_graph(rng, n, 0.5)
        if g.num_edges > 20:
            continue
        ts = rng.sample(range(n), rng.randint(2, n))
        k = rng.randint(1, 3)
        a = brute_force_subset_optimum(g, ts, k, order="cost")
        b = brute_force_subset_optimum(g, ts, k, order="index")
        assert (a is None) == (b is None)
        if a is not None:
            assert a[0] == b[0]
        done += 1
