"""Exact reference solvers and the feasibility verifier.

``min_cost_completion`` is a branch-and-bound search over edge subsets for
any monotone feasibility predicate (adding edges never breaks it). It backs
the brute-force optimum for subset and rooted connectivity and the
``oracle-exact`` rooted strategy.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable

from .connectivity import as_terminals, rooted_connectivity
from .errors import InputError, SizeLimitError
from .graph import Edge, Graph, edge_key, iter_pairs, local_connectivity

EDGE_BOUND = 22


class SubsetFeasibility:
    """Predicate: terminals are ``k``-connected in the subgraph on an edge set.

    Remembers the last failing pair and tries it first, which rejects most
    infeasible candidates with a single flow.
    """

    def __init__(self, g: Graph, terminals: Iterable[int], k: int):
        self.g = g
        self.pairs = list(iter_pairs(as_terminals(g, terminals)))
        self.k = k
        self._last = None

    def __call__(self, edges: frozenset[Edge]) -> bool:
        sub = self.g.subgraph(edges)
        if self._last is not None and local_connectivity(sub, *self._last, self.k) < self.k:
            return False
        for s, t in self.pairs:
            if local_connectivity(sub, s, t, self.k) < self.k:
                self._last = (s, t)
                return False
        return True


class RootedFeasibility:
    """Predicate: the root has ``k`` openly disjoint paths to every terminal."""

    def __init__(self, g: Graph, root: int, terminals: Iterable[int], k: int):
        self.g = g
        self.root = root
        self.terminals = [t for t in sorted(set(terminals)) if t != root]
        self.k = k
        self._last = None

    def __call__(self, edges: frozenset[Edge]) -> bool:
        sub = self.g.subgraph(edges)
        if self._last is not None and local_connectivity(sub, self.root, self._last, self.k) < self.k:
            return False
        for t in self.terminals:
            if local_connectivity(sub, self.root, t, self.k) < self.k:
                self._last = t
                return False
        return True


def min_cost_completion(
    g: Graph,
    base: Iterable[Edge],
    feasible: Callable[[frozenset[Edge]], bool],
    bound: int = EDGE_BOUND,
    order: str = "cost",
):
    """Cheapest set ``F`` of edges outside ``base`` with ``feasible(base + F)``.

    Returns ``(cost, F)`` or ``None`` when even the full edge set fails.
    Zero-cost edges are always taken, so ``bound`` limits the positive-cost
    edges that are branched on. ``order`` selects the search order:
    ``"cost"`` branches on expensive edges first and tries exclusion first,
    ``"index"`` walks edges by descending id and tries inclusion first.
    Both orders are exhaustive and must agree on the optimum cost.
    """
    base = frozenset(edge_key(*e) for e in base)
    free = {(u, v) for u, v, c in g.edges if c == 0} - base
    cands = [(u, v) for u, v, c in g.edges if c != 0 and (u, v) not in base]
    if len(cands) > bound:
        raise SizeLimitError(f"exact search limited to {bound} positive-cost edges, got {len(cands)}")
    fixed = base | free
    if not feasible(fixed | frozenset(cands)):
        return None
    if order == "cost":
        cands.sort(key=lambda e: (-g.cost(*e), e))
        exclude_first = True
    elif order == "index":
        cands.sort(reverse=True)
        exclude_first = False
    else:
        raise InputError(f"unknown search order {order!r}")
    costs = [g.cost(*e) for e in cands]
    best_cost = None
    best_set: frozenset[Edge] = frozenset()

    def search(i: int, chosen: list[Edge], spent) -> None:
        nonlocal best_cost, best_set
        if best_cost is not None and spent >= best_cost:
            return
        if i == len(cands):
            # invariant: fixed + chosen is feasible here
            best_cost, best_set = spent, frozenset(chosen)
            return
        e = cands[i]
        rest = cands[i + 1 :]

        def try_exclude():
            if feasible(fixed | frozenset(chosen) | frozenset(rest)):
                search(i + 1, chosen, spent)

        def try_include():
            chosen.append(e)
            search(i + 1, chosen, spent + costs[i])
            chosen.pop()

        if exclude_first:
            try_exclude()
            try_include()
        else:
            try_include()
            try_exclude()

    search(0, [], 0)
    return best_cost, (best_set | free)


@dataclass(frozen=True)
class Certificate:
    """Per-pair openly disjoint path counts for a candidate solution."""

    k: int
    pairs: dict[tuple[int, int], int]
    passed: bool
    witness: tuple[int, int] | None = None
    notes: tuple[str, ...] = field(default=())

    @property
    def min_connectivity(self) -> int | None:
        return min(self.pairs.values()) if self.pairs else None

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "passed": self.passed,
            "witness": list(self.witness) if self.witness else None,
            "min_connectivity": self.min_connectivity,
            "pairs": [[s, t, c] for (s, t), c in sorted(self.pairs.items())],
        }


def verify_solution(g: Graph, terminals: Iterable[int], k: int, solution: Iterable[Edge]) -> Certificate:
    """Check that ``solution`` (a subset of ``g``'s edges) makes the terminals ``k``-connected."""
    ts = as_terminals(g, terminals)
    sub = g.subgraph(solution)
    pairs = {}
    witness = None
    worst = None
    for s, t in iter_pairs(ts):
        c = local_connectivity(sub, s, t)
        pairs[(s, t)] = c
        if c < k and (worst is None or c < worst):
            worst, witness = c, (s, t)
    return Certificate(k, pairs, witness is None, witness)


def verify_rooted(g: Graph, root: int, terminals: Iterable[int], k: int, solution: Iterable[Edge]) -> bool:
    return rooted_connectivity(g.subgraph(solution), root, terminals, k) >= k


def brute_force_subset_optimum(
    g: Graph,
    terminals: Iterable[int],
    k: int,
    purchased: Iterable[Edge] = (),
    bound: int = EDGE_BOUND,
    order: str = "cost",
):
    """Exact optimum ``(cost, new_edges)`` for subset ``k``-connectivity, or None."""
    return min_cost_completion(g, purchased, SubsetFeasibility(g, terminals, k), bound, order)


def brute_force_rooted_optimum(
    g: Graph,
    root: int,
    terminals: Iterable[int],
    k: int,
    purchased: Iterable[Edge] = (),
    bound: int = EDGE_BOUND,
    order: str = "cost",
):
    """Exact optimum ``(cost, new_edges)`` for rooted ``k``-connectivity, or None."""
    return min_cost_completion(g, purchased, RootedFeasibility(g, root, terminals, k), bound, order)
