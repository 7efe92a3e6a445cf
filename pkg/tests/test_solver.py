import json
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import T1, T2, T3, T4, graphs_with_terminals, random_graph
from families import cut_vertex, ring
from subsetkconn.connectivity import deficient_masks, subset_connectivity
from subsetkconn.cores import BruteForceStructure, compute_core_records, halo_membership_bound, halo_membership_counts
from subsetkconn.errors import InfeasibleError, InputError
from subsetkconn.generate import EXAMPLE_EDGES, GenSpec, generate
from subsetkconn.graph import Graph, min_cost_disjoint_paths
from subsetkconn.oracle import brute_force_subset_optimum, verify_solution
from subsetkconn.solver import (
    AugmentationState,
    Guards,
    Instance,
    SolverConfig,
    compose_small_T_solver,
    covering_procedure,
    iterative_solve,
    preprocess_reduce_cores,
    solve,
    subdivide_terminal_edges,
    trivial_pairwise,
)


def enumerate_masks(g, ts, target=2):
    return deficient_masks(g, ts, target)[0]


def tree_pool_instance(k=2):
    return generate(GenSpec(model="padded-tree", layout="example-tree", k=k, seed=3)).to_instance()


def spider(legs: int):
    """Centre 0, legs 0 - a_i - t_i bought, plus one hub joined to every t_i."""
    edges, tree, ts = [], [], []
    hub = 2 * legs + 1
    for i in range(legs):
        a, t = 1 + 2 * i, 2 + 2 * i
        tree += [(0, a), (a, t)]
        ts.append(t)
        edges += [(0, a, 1), (a, t, 1), (t, hub, 2)]
    return Graph(hub + 1, edges), tuple(ts), frozenset(tree)


class TestSolve:
    def test_k1_zero_cost_tree(self, tree9):
        g, ts = tree9
        zero = Graph(g.n, [(u, v, 0) for u, v in EXAMPLE_EDGES] + [(5, 7, 4), (6, 8, 4)])
        rep = solve(Instance(zero, ts, 1))
        assert rep.total_cost == 0
        assert rep.verification.passed
        assert rep.dispatch_case == "large"  # |T| = 4 >= k^2 = 1

    def test_example_tree_pool_k2(self):
        inst = tree_pool_instance()
        rep = solve(inst)
        assert rep.verification.passed and rep.dispatch_case == "large"
        opt = brute_force_subset_optimum(inst.graph, inst.terminals, 2, inst.purchased)
        assert rep.total_cost >= opt[0]

    def test_moderate_dispatch(self):
        # k = 3 with 6 terminals: 2k <= |T| < k^2
        inst = generate(GenSpec(model="random-geometric", n=14, num_terminals=6, k=3, seed=1)).to_instance()
        rep = solve(inst)
        assert rep.dispatch_case == "moderate" and rep.verification.passed

    def test_infeasible_names_pair(self):
        g = Graph(4, [(0, 1, 1), (2, 3, 1)])
        with pytest.raises(InfeasibleError) as info:
            solve(Instance(g, [0, 3], 1))
        assert info.value.witness == (0, 3)

    def test_bad_config(self):
        with pytest.raises(InputError):
            SolverConfig(dispatch="fastest")
        with pytest.raises(InputError):
            Instance(Graph(2, [(0, 1, 1)]), [0, 1], 0)

    def test_below2k_dispatch_options(self):
        inst = generate(GenSpec(model="power-of-k-core", n=10, num_terminals=4, k=3, seed=2)).to_instance()
        auto = solve(inst)
        forced = solve(inst, SolverConfig(dispatch="iterative"))
        best = solve(inst, SolverConfig(dispatch="cheapest"))
        assert auto.dispatch_case == "trivial" and forced.dispatch_case == "below2k"
        assert best.total_cost == min(auto.total_cost, forced.total_cost)
        for rep in (auto, forced, best):
            assert rep.verification.passed

    def test_report_is_deterministic_json(self):
        inst = tree_pool_instance()
        a = json.dumps(solve(inst).to_dict(), sort_keys=True)
        b = json.dumps(solve(inst).to_dict(), sort_keys=True)
        assert a == b

    def test_oracle_exact_strategy_is_interchangeable(self):
        inst = generate(GenSpec(model="random-geometric", n=7, num_terminals=4, k=2, seed=8, max_edges=14)).to_instance()
        a = solve(inst)
        b = solve(inst, SolverConfig(strategy="oracle-exact"))
        assert a.verification.passed and b.verification.passed


class TestSubdivision:
    def test_terminal_edges_split_and_mapped_back(self):
        g = Graph(3, [(0, 1, 5), (1, 2, 3), (0, 2, Fraction(7, 2))])
        inst = Instance(g, [0, 1, 2], 2, frozenset({(0, 1)}))
        work, back = subdivide_terminal_edges(inst)
        assert work.graph.n == 6
        assert all(not (u in inst.terminals and v in inst.terminals) for u, v, _ in work.graph.edges)
        assert work.graph.cost_of(work.graph.edge_set) == g.cost_of(g.edge_set)
        assert len(work.purchased) == 2
        assert back(work.graph.edge_set) == g.edge_set
        rep = solve(inst)
        assert rep.verification.passed and rep.total_cost == Fraction(13, 2)


class TestTrivialPairwise:
    def test_two_terminals_one_flow(self):
        rng = random.Random(4)
        for _ in range(20):
            g = random_graph(rng, 8, 0.6)
            try:
                expected = min_cost_disjoint_paths(g, 0, 7, 2)
            except InfeasibleError:
                continue
            got = trivial_pairwise(Instance(g, [0, 7], 2))
            assert g.cost_of(got) == g.cost_of(expected)

    def test_k1_is_union_of_paths(self):
        g = Graph(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1), (0, 3, 10)])
        assert trivial_pairwise(Instance(g, [0, 2, 3], 1)) == {(0, 1), (1, 2), (2, 3)}

    def test_within_pairs_bound_of_optimum(self):
        rng = random.Random(9)
        checked = 0
        while checked < 20:
            g = random_graph(rng, rng.randint(5, 8), 0.55)
            if g.num_edges > 16:
                continue
            ts = rng.sample(range(g.n), 3)
            opt = brute_force_subset_optimum(g, ts, 2)
            if opt is None:
                continue
            sol = trivial_pairwise(Instance(g, ts, 2))
            assert verify_solution(g, ts, 2, sol).passed
            assert g.cost_of(sol) <= 9 * opt[0]
            checked += 1


class TestIterative:
    def test_already_connected_costs_nothing(self):
        inst = tree_pool_instance()
        full = Instance(inst.graph, inst.terminals, 2, inst.graph.edge_set)
        rep = iterative_solve(full)
        assert rep.total_cost == 0 and rep.traces == []

    def test_k1_from_nothing(self):
        g = Graph(5, [(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 4, 1)])
        rep = iterative_solve(Instance(g, [0, 2, 4], 1))
        assert rep.verification.passed
        assert rep.inner_iterations == [0]  # padding at level 0 already connects everything

    def test_random_inner_iteration_bound(self):
        rng = random.Random(21)
        runs = 0
        for seed in range(40):
            n = rng.randint(8, 16)
            t = rng.randint(4, min(8, n - 2))
            inst = generate(GenSpec(n=n, num_terminals=t, k=2, seed=seed, radius=0.4)).to_instance()
            rep = iterative_solve(inst, SolverConfig(assert_level="always"))
            assert rep.verification.passed
            assert all(j <= math.ceil(math.log2(t)) + 1 for j in rep.inner_iterations)
            runs += 1
        assert runs == 40

    def test_without_preprocessing(self):
        inst = generate(GenSpec(n=12, num_terminals=6, k=3, seed=5)).to_instance()
        rep = iterative_solve(inst, SolverConfig(preprocess=False))
        assert rep.verification.passed


class TestCovering:
    def test_single_core(self):
        g = Graph(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1), (0, 3, 4)])
        state = AugmentationState(g, (0, 2), {(0, 1), (1, 2)}, 1)
        records = compute_core_records(g.subgraph(state.purchased), (0, 2), 1)
        assert len(records) == 2
        new, trace = covering_procedure(state, records[:1], "moderate")
        assert trace.roots == [0] and len(trace.call_costs) == 1

    def test_example_tree_state(self):
        inst = tree_pool_instance()
        state = AugmentationState(inst.graph, inst.terminals, set(inst.purchased), 1)
        records = compute_core_records(state.subgraph(), inst.terminals, 1)
        assert [r.core for r in records] == [{T1}, {T2}, {T3}, {T4}]
        new, trace = covering_procedure(state, records, "moderate", guards=Guards("always"))
        assert len(trace.micro) <= 2
        assert trace.micro[0].chosen[0] == T1
        after = inst.graph.subgraph(state.purchased | new)
        brute = BruteForceStructure(state.subgraph(), inst.terminals, 1)
        still = {int(m) for m in enumerate_masks(after, inst.terminals)}
        for c in brute.core_masks:
            assert not still & set(brute.family(c))

    def test_eight_families_halving(self):
        g, ts, tree = spider(8)
        state = AugmentationState(g, ts, set(tree), 1)
        records = compute_core_records(state.subgraph(), ts, 1)
        assert len(records) == 8
        _, trace = covering_procedure(state, records, "moderate", guards=Guards("always"))
        h1 = trace.h1
        assert h1 == 8
        for step in trace.micro:
            assert step.uncovered * 2 ** (step.index - 1) <= h1

    def test_large_mode_single_round(self):
        g, ts, tree = spider(5)
        state = AugmentationState(g, ts, set(tree), 1)
        records = compute_core_records(state.subgraph(), ts, 1)
        _, trace = covering_procedure(state, records, "large", guards=Guards("always"))
        assert len(trace.micro) == 1

    def test_empty_records_rejected(self):
        g, ts, tree = spider(3)
        with pytest.raises(InputError):
            covering_procedure(AugmentationState(g, ts, set(tree), 1), [], "moderate")


class TestPreprocess:
    def test_level_zero_connects_to_first_terminal(self):
        g, ts, _ = spider(3)
        state = AugmentationState(g, ts, set(), 0)
        new = preprocess_reduce_cores(state)
        assert subset_connectivity(g.subgraph(new), ts) >= 1

    def test_example_tree_every_core_holds_an_r_terminal(self):
        inst = tree_pool_instance()
        state = AugmentationState(inst.graph, inst.terminals, set(inst.purchased), 1)
        new = preprocess_reduce_cores(state, guards=Guards("always"))
        sub = inst.graph.subgraph(state.purchased | new)
        r_set = set(inst.terminals[:2])
        for rec in compute_core_records(sub, inst.terminals, 1):
            assert rec.core & r_set

    def test_tight_terminal_count_respects_membership_bound(self):
        # |T| = 2l with l = 2
        inst = generate(GenSpec(model="power-of-k-core", n=12, num_terminals=4, k=3, seed=6)).to_instance()
        g, ts = inst.graph, inst.terminals
        base = set(trivial_pairwise(Instance(g, ts, 2)))
        state = AugmentationState(g, ts, base, 2)
        new = preprocess_reduce_cores(state)
        records = compute_core_records(g.subgraph(base | new), ts, 2)
        if records:
            cap = halo_membership_bound(len(ts), 2)
            assert max(halo_membership_counts(records, ts).values()) <= cap

    def test_needs_enough_terminals(self):
        g, ts, tree = spider(3)
        with pytest.raises(InputError):
            preprocess_reduce_cores(AugmentationState(g, ts, set(tree), 2))


class TestCompose:
    def test_one_extra_terminal(self):
        inst = generate(GenSpec(model="power-of-k-core", n=9, num_terminals=3, k=2, seed=1)).to_instance()
        rep = compose_small_T_solver(inst)
        assert rep.verification.passed and rep.dispatch_case == "compose"

    def test_random_feasible(self):
        rng = random.Random(2)
        for seed in range(15):
            n = rng.randint(8, 14)
            k = rng.randint(1, 3)
            inst = generate(GenSpec(n=n, num_terminals=rng.randint(k + 1, n - k), k=k, seed=seed)).to_instance()
            assert compose_small_T_solver(inst).verification.passed

    def test_t_equals_k_is_base_output(self):
        inst = generate(GenSpec(model="power-of-k-core", n=9, num_terminals=3, k=3, seed=4)).to_instance()
        rep = compose_small_T_solver(inst)
        assert rep.solution == frozenset(trivial_pairwise(inst)) | inst.purchased


class TestDeepTraces:
    @pytest.mark.parametrize("m", [6, 7, 8])
    def test_ring_needs_two_micro_iterations(self, m):
        rep = iterative_solve(ring(m), SolverConfig(preprocess=False, assert_level="always"))
        assert rep.verification.passed
        first = rep.traces[0]
        assert first.mode == "moderate" and len(first.micro) == 2
        assert first.micro[0].uncovered == m and first.micro[1].uncovered == 2

    @pytest.mark.parametrize("side,legs", [(2, 3), (3, 4), (2, 5)])
    def test_cut_vertex_needs_two_inner_iterations(self, side, legs):
        rep = iterative_solve(cut_vertex(side, legs), SolverConfig(preprocess=False, assert_level="always"))
        assert rep.verification.passed
        assert rep.inner_iterations == [2]
        assert [t.smallest_deficient_terminals for t in rep.traces] == [1, side]


@settings(max_examples=60)
@given(graphs_with_terminals(min_n=4, max_n=11), st.integers(1, 3), st.sampled_from(["auto", "iterative", "cheapest"]))
def test_every_report_verifies(gt, k, dispatch):
    g, ts = gt
    inst = Instance(g, ts, k)
    try:
        rep = solve(inst, SolverConfig(dispatch=dispatch))
    except InfeasibleError:
        assert subset_connectivity(g, ts) < k
        return
    assert subset_connectivity(g.subgraph(rep.solution), ts) >= k
    assert rep.total_cost == g.cost_of(rep.solution)
