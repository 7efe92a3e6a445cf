"""Rooted connectivity augmentation and root padding.

Augmenting rooted connectivity is the cost-bearing subroutine of the
subset solver. It is pluggable: a strategy maps a request to a set of new
edges, and every result is re-checked with the flow oracle before it is
accepted.

Registered strategies:

``per-terminal``
    For each terminal (ascending id) still short of the target, buy the
    cheapest family of ``target`` openly disjoint root paths, pricing every
    edge bought so far at zero. Always feasible when the full graph is;
    its cost can be up to ``|T|`` times the optimum.

``oracle-exact``
    Exhaustive search for the cheapest completion. Only for tiny graphs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

from .connectivity import as_terminals, enumerate_deficient_sets, rooted_connectivity
from .errors import GuardViolation, InfeasibleError, InputError
from .graph import Edge, Graph, edge_key, local_connectivity, min_cost_disjoint_paths
from .oracle import RootedFeasibility, min_cost_completion

ORACLE_EXACT_VERTEX_BOUND = 12


@dataclass(frozen=True)
class RootedAugmentRequest:
    graph: Graph
    purchased: frozenset[Edge]
    root: int
    terminals: tuple[int, ...]
    current_level: int
    target_level: int

    def __post_init__(self):
        if self.target_level <= self.current_level:
            raise InputError("target level must exceed the current level")

    @classmethod
    def make(cls, graph: Graph, purchased: Iterable[Edge], root: int, terminals: Iterable[int], target: int):
        bought = graph.check_edges(purchased)
        ts = as_terminals(graph, terminals, min_size=0)
        current = rooted_connectivity(graph.subgraph(bought), root, ts, target)
        return cls(graph, bought, root, ts, min(current, target - 1), target)


@dataclass(frozen=True)
class AugmentResult:
    new_edges: frozenset[Edge]
    cost: object
    strategy_name: str


Strategy = Callable[[RootedAugmentRequest], frozenset]
STRATEGIES: dict[str, Strategy] = {}


def register_strategy(name: str):
    def deco(fn: Strategy) -> Strategy:
        STRATEGIES[name] = fn
        return fn

    return deco


@register_strategy("per-terminal")
def per_terminal(req: RootedAugmentRequest) -> frozenset:
    g, r, target = req.graph, req.root, req.target_level
    have = set(req.purchased)
    bought: set[Edge] = set()
    for t in req.terminals:
        if t == r:
            continue
        if local_connectivity(g.subgraph(have), r, t, target) >= target:
            continue
        try:
            paths = min_cost_disjoint_paths(g, r, t, target, free_edges=have)
        except InfeasibleError as exc:
            raise InfeasibleError(
                f"root {r} cannot reach terminal {t} by {target} openly disjoint paths (max {exc.achieved})",
                witness=t,
                achieved=exc.achieved,
            ) from None
        fresh = paths - have
        bought |= fresh
        have |= fresh
    return frozenset(bought)


@register_strategy("oracle-exact")
def oracle_exact(req: RootedAugmentRequest) -> frozenset:
    g = req.graph
    if g.n > ORACLE_EXACT_VERTEX_BOUND:
        raise InputError(f"oracle-exact strategy is limited to {ORACLE_EXACT_VERTEX_BOUND} vertices")
    pred = RootedFeasibility(g, req.root, req.terminals, req.target_level)
    found = min_cost_completion(g, req.purchased, pred)
    if found is None:
        raise InfeasibleError(f"rooted {req.target_level}-connectivity from {req.root} is infeasible")
    _, edges = found
    return frozenset(edges) - req.purchased


def augment_rooted(req: RootedAugmentRequest, strategy: str = "per-terminal") -> AugmentResult:
    """Raise rooted connectivity from ``req.root`` to ``req.target_level``.

    The result is verified with the flow oracle; a strategy that returns an
    insufficient edge set triggers ``GuardViolation``.
    """
    try:
        fn = STRATEGIES[strategy]
    except KeyError:
        raise InputError(f"unknown rooted strategy {strategy!r}; known: {sorted(STRATEGIES)}") from None
    new = frozenset(edge_key(*e) for e in fn(req)) - req.purchased
    req.graph.check_edges(new)
    sub = req.graph.subgraph(req.purchased | new)
    if rooted_connectivity(sub, req.root, req.terminals, req.target_level) < req.target_level:
        raise GuardViolation(f"strategy {strategy!r} left root {req.root} below level {req.target_level}")
    return AugmentResult(new, req.graph.cost_of(new), strategy)


def padded_graph(g: Graph, r_set: Iterable[int]) -> tuple[Graph, int, frozenset[Edge]]:
    """``g`` plus a new vertex joined by zero-cost edges to every vertex of ``r_set``."""
    hub = g.n
    pad = [(t, hub, 0) for t in sorted(set(r_set))]
    return g.extended(1, pad), hub, frozenset((t, hub) for t, _, _ in pad)


def root_pad(
    g: Graph,
    purchased: Iterable[Edge],
    r_set: Iterable[int],
    rho: int,
    terminals: Iterable[int],
    strategy: str = "per-terminal",
    check: bool = False,
) -> AugmentResult:
    """Root padding: force every deficient set (w.r.t. ``rho``) to meet ``r_set``.

    Adds a temporary hub joined at zero cost to ``r_set``, augments rooted
    ``rho``-connectivity from the hub to all terminals, then drops the hub.
    With ``check`` the guarantee is confirmed by exhaustive enumeration.
    """
    rs = sorted(set(r_set))
    ts = as_terminals(g, terminals)
    if rho > len(rs):
        raise InputError(f"rho={rho} exceeds |R|={len(rs)}")
    if not set(rs) <= set(ts):
        raise InputError("R must be a subset of the terminals")
    bought = g.check_edges(purchased)
    if rho <= 0:
        return AugmentResult(frozenset(), 0, strategy)
    big, hub, pad = padded_graph(g, rs)
    res = augment_rooted(RootedAugmentRequest.make(big, bought | pad, hub, ts, rho), strategy)
    new = frozenset(e for e in res.new_edges if hub not in e)
    if check:
        rmask = set(rs)
        sub = g.subgraph(bought | new)
        for u in enumerate_deficient_sets(sub, ts, rho):
            if not (u.members & rmask):
                raise GuardViolation(f"deficient set {sorted(u.members)} avoids the padding set {rs}")
    return AugmentResult(new, g.cost_of(new), res.strategy_name)
