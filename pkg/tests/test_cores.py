from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings

from conftest import R, T1, T2, T3, T4, V1, V2, V3, V4, graphs_with_terminals
from reference import cores_and_halos
from subsetkconn.connectivity import DeficientSet, complement_mask, enumerate_deficient_sets, subset_connectivity
from subsetkconn.cores import (
    BruteForceStructure,
    compute_core_records,
    compute_cores,
    compute_halo_set,
    halo_family_member,
    halo_membership_bound,
    halo_membership_counts,
    hits,
    thickness_table,
)
from subsetkconn.errors import InputError, StateError
from subsetkconn.graph import Graph, mask_of, members

TREE_CORES = [frozenset({T1}), frozenset({T2}), frozenset({T3}), frozenset({T4})]


def _deficient(g, ts, members):
    return DeficientSet.from_mask(g, mask_of(ts), mask_of(members))


class TestExampleTree:
    def test_cores(self, tree9):
        g, ts = tree9
        assert compute_cores(g, ts, 1) == TREE_CORES

    def test_halo_sets(self, tree9):
        g, ts = tree9
        halos = {r.core: r.halo_set for r in compute_core_records(g, ts, 1)}
        assert halos[frozenset({T3})] == {T3, V2, V3}
        assert halos[frozenset({T1})] == {T1}
        assert halos[frozenset({T2})] == {T2}
        assert halos[frozenset({T4})] == {T4, V4}

    def test_compute_halo_set_single(self, tree9):
        g, ts = tree9
        rec = compute_halo_set(g, ts, 1, {T3}, TREE_CORES)
        assert rec.halo_set == {T3, V2, V3}
        assert rec.halo_neighbors == {R}

    def test_non_core_rejected(self, tree9):
        g, ts = tree9
        with pytest.raises(InputError):
            compute_halo_set(g, ts, 1, {T3, V3}, TREE_CORES)

    def test_wrong_level_is_a_state_error(self, tree9):
        g, ts = tree9
        with pytest.raises(StateError):
            compute_cores(g, ts, 2)

    def test_family_membership(self, tree9):
        g, ts = tree9
        assert halo_family_member(_deficient(g, ts, {T3, V2, V3}), {T3}, TREE_CORES)
        assert not halo_family_member(_deficient(g, ts, {T1, T2, V1}), {T1}, TREE_CORES)
        assert halo_family_member(_deficient(g, ts, {T3}), {T3}, TREE_CORES)

    def test_family_of_t3_by_enumeration(self, tree9):
        g, ts = tree9
        brute = BruteForceStructure(g, ts, 1)
        family = {members(m) for m in brute.family(mask_of({T3}))}
        assert family == {frozenset({T3}), frozenset({T3, V3}), frozenset({T3, V2, V3})}

    def test_t1_t2_small_deficient_but_in_no_family(self, tree9):
        g, ts = tree9
        u = _deficient(g, ts, {T1, T2, V1})
        assert u.is_small and len(u.neighbors) < 2
        assert not any(halo_family_member(u, c, TREE_CORES) for c in TREE_CORES)

    def test_thickness_all_zero(self, tree9):
        g, ts = tree9
        records = compute_core_records(g, ts, 1)
        assert [r.halo_neighbors for r in records] == [{V1}, {V1}, {R}, {R}]
        table = thickness_table(records, ts)
        assert table.counts == {T1: 0, T2: 0, T3: 0, T4: 0}
        assert table.min_terminal == T1 and table.q == 4

    def test_hits(self, tree9):
        g, ts = tree9
        rec = compute_halo_set(g, ts, 1, {T3}, TREE_CORES)
        assert hits([T3], rec)
        assert hits([T1], rec)
        assert not hits([], rec)
        assert not hits([V2], rec)


def test_no_cores_when_already_connected():
    g = Graph(4, [(u, v, 1) for u, v in combinations(range(4), 2)])
    assert compute_cores(g, range(4), 3) == []
    assert thickness_table([], range(4)).counts == {0: 0, 1: 0, 2: 0, 3: 0}


def test_singleton_family():
    # 0 and 2 joined only through 1; each side is its own family
    g = Graph(3, [(0, 1, 1), (1, 2, 1)])
    recs = compute_core_records(g, [0, 2], 1)
    assert [(r.core, r.halo_set) for r in recs] == [({0}, {0}), ({2}, {2})]


@settings(max_examples=120)
@given(graphs_with_terminals(max_n=9))
def test_matches_definitions(gt):
    g, ts = gt
    level = subset_connectivity(g, ts)
    cores, halos = cores_and_halos(g, ts, level)
    records = compute_core_records(g, ts, level)
    assert [r.core for r in records] == sorted(cores, key=sorted)
    for r in records:
        assert r.halo_set == halos[r.core][0]


@settings(max_examples=150)
@given(graphs_with_terminals(max_n=12))
def test_matches_enumeration(gt):
    g, ts = gt
    level = subset_connectivity(g, ts)
    assert compute_core_records(g, ts, level) == BruteForceStructure(g, ts, level).records()


@settings(max_examples=80)
@given(graphs_with_terminals(max_n=12))
def test_disjointness(gt):
    g, ts = gt
    level = subset_connectivity(g, ts)
    brute = BruteForceStructure(g, ts, level)
    tmask = mask_of(ts)
    fams = [brute.family(c) for c in brute.core_masks]
    for fa, fb in combinations(fams, 2):
        for u in fa:
            for w in fb:
                assert (u & w & tmask) == 0 or (complement_mask(g, u) & complement_mask(g, w) & tmask) == 0


@settings(max_examples=150)
@given(graphs_with_terminals(min_n=4, max_n=12, min_t=3))
def test_halo_bounds_and_thickness(gt):
    g, ts = gt
    level = subset_connectivity(g, ts)
    if len(ts) <= level:
        return
    records = compute_core_records(g, ts, level)
    if not records:
        return
    cap = halo_membership_bound(len(ts), level)
    assert max(halo_membership_counts(records, ts).values()) <= cap + 1e-9
    assert all(len(r.halo_neighbors) <= level for r in records)
    table = thickness_table(records, ts)
    assert all(c <= table.q for c in table.counts.values())
    assert table.min_thickness * len(ts) <= level * table.q


@settings(max_examples=150)
@given(graphs_with_terminals(max_n=12))
def test_two_core_exclusion(gt):
    g, ts = gt
    level = subset_connectivity(g, ts)
    brute = BruteForceStructure(g, ts, level)
    tmask = mask_of(ts)
    for a, b in combinations(brute.core_masks, 2):
        if a & b & tmask:
            both = a | b
            assert not np.any((brute.small & both) == both)


@settings(max_examples=40)
@given(graphs_with_terminals(min_n=13, max_n=18))
def test_matches_enumeration_sampled_up_to_18(gt):
    g, ts = gt
    level = subset_connectivity(g, ts)
    records = compute_core_records(g, ts, level)
    assert records == BruteForceStructure(g, ts, level).records()
    if len(ts) > level and records:
        assert all(len(r.halo_neighbors) <= level for r in records)


def test_enumeration_agrees_with_records_family_size(tree9):
    g, ts = tree9
    recs = BruteForceStructure(g, ts, 1).records()
    assert [r.witness_family_size for r in recs] == [1, 1, 3, 2]
    assert len(enumerate_deficient_sets(g, ts, 2)) > 0
