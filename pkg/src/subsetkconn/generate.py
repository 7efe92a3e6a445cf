"""Seeded random instance generators.

Every model embeds a feasibility skeleton, so the full edge set of a
generated instance is always subset ``k``-connected:

``random-geometric``
    Points in the unit square joined within ``radius``; ``k`` hub vertices
    are joined to every terminal.
``power-of-k-core``
    A random Hamiltonian cycle raised to the power ``ceil(k/2)`` (which is
    ``k``-vertex-connected) plus random chords.
``padded-tree``
    A random tree holding the terminals, bought in advance, plus ``k`` hubs
    joined to every terminal and random extra edges. ``layout="example-tree"``
    gives the nine-vertex example tree used throughout the tests.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .errors import InputError
from .graph import edge_key
from .instance_io import InstanceFile

MODELS = ("random-geometric", "power-of-k-core", "padded-tree")
COST_MODELS = ("uniform", "unit", "geometric")

# Example tree: root 0, inner vertices v1..v4 = 1..4, terminals t1..t4 = 5..8
EXAMPLE_EDGES = ((0, 1), (0, 2), (0, 4), (1, 5), (1, 6), (2, 3), (3, 7), (4, 8))
EXAMPLE_TERMINALS = (5, 6, 7, 8)
EXAMPLE_NAMES = {0: "r", 1: "v1", 2: "v2", 3: "v3", 4: "v4", 5: "t1", 6: "t2", 7: "t3", 8: "t4"}


@dataclass(frozen=True)
class GenSpec:
    model: str = "random-geometric"
    n: int = 20
    num_terminals: int = 6
    k: int = 2
    cost: str = "uniform"
    max_cost: int = 10
    seed: int = 0
    radius: float = 0.35
    extra_edge_prob: float = 0.15
    max_edges: int | None = None
    layout: str = "random"

    def __post_init__(self):
        if self.model not in MODELS:
            raise InputError(f"unknown model {self.model!r}; choose from {MODELS}")
        if self.cost not in COST_MODELS:
            raise InputError(f"unknown cost model {self.cost!r}; choose from {COST_MODELS}")
        if self.k < 1 or self.max_cost < 1:
            raise InputError("k and max_cost must be positive")
        if self.layout == "example-tree":
            if self.model != "padded-tree":
                raise InputError("the example-tree layout belongs to the padded-tree model")
            return
        if self.layout != "random":
            raise InputError(f"unknown layout {self.layout!r}")
        if not 2 <= self.num_terminals <= self.n:
            raise InputError("need 2 <= |T| <= n")
        if self.model == "power-of-k-core":
            if self.n < 2 * math.ceil(self.k / 2) + 1:
                raise InputError(f"power-of-k-core needs n >= {2 * math.ceil(self.k / 2) + 1} for k={self.k}")
        elif self.n < self.num_terminals + self.k:
            raise InputError(f"{self.model} needs n >= |T| + k for its {self.k} hub vertices")


class _Builder:
    def __init__(self, spec: GenSpec, n: int):
        self.spec = spec
        self.rng = random.Random(spec.seed)
        self.n = n
        self.pos = [(self.rng.random(), self.rng.random()) for _ in range(n)]
        self.edges: dict[tuple[int, int], int] = {}
        self.protected: set[tuple[int, int]] = set()

    def cost(self, u: int, v: int) -> int:
        s = self.spec
        if s.cost == "unit":
            return 1
        if s.cost == "geometric":
            d = math.dist(self.pos[u], self.pos[v])
            return 1 + round(d * (s.max_cost - 1) / math.sqrt(2))
        return self.rng.randint(1, s.max_cost)

    def add(self, u: int, v: int, protect: bool = False, cost: int | None = None) -> None:
        e = edge_key(u, v)
        if e not in self.edges:
            self.edges[e] = self.cost(u, v) if cost is None else cost
        if protect:
            self.protected.add(e)

    def hubs(self, hubs: list[int], terminals: list[int]) -> None:
        for h in hubs:
            for t in terminals:
                self.add(h, t, protect=True)

    def trim(self) -> None:
        cap = self.spec.max_edges
        if cap is None or len(self.edges) <= cap:
            return
        if len(self.protected) > cap:
            raise InputError(f"feasibility skeleton alone has {len(self.protected)} edges, above max_edges={cap}")
        optional = sorted(set(self.edges) - self.protected)
        self.rng.shuffle(optional)
        for e in optional[: len(self.edges) - cap]:
            del self.edges[e]

    def finish(self, terminals, purchased=()) -> InstanceFile:
        self.trim()
        edges = [(u, v, c) for (u, v), c in sorted(self.edges.items())]
        return InstanceFile(self.n, self.spec.k, sorted(terminals), edges, sorted(purchased))


def _random_geometric(spec: GenSpec) -> InstanceFile:
    b = _Builder(spec, spec.n)
    order = list(range(spec.n))
    b.rng.shuffle(order)
    hubs = order[: spec.k]
    terminals = order[spec.k : spec.k + spec.num_terminals]
    for u in range(spec.n):
        for v in range(u + 1, spec.n):
            if math.dist(b.pos[u], b.pos[v]) <= spec.radius:
                b.add(u, v)
    b.hubs(hubs, terminals)
    return b.finish(terminals)


def _power_core(spec: GenSpec) -> InstanceFile:
    b = _Builder(spec, spec.n)
    cycle = list(range(spec.n))
    b.rng.shuffle(cycle)
    m = math.ceil(spec.k / 2)
    for i in range(spec.n):
        for j in range(1, m + 1):
            b.add(cycle[i], cycle[(i + j) % spec.n], protect=True)
    for u in range(spec.n):
        for v in range(u + 1, spec.n):
            if b.rng.random() < spec.extra_edge_prob:
                b.add(u, v)
    terminals = b.rng.sample(range(spec.n), spec.num_terminals)
    return b.finish(terminals)


def _padded_tree(spec: GenSpec) -> InstanceFile:
    if spec.layout == "example-tree":
        return _example_tree(spec)
    b = _Builder(spec, spec.n)
    tree_n = spec.n - spec.k
    order = list(range(spec.n))
    b.rng.shuffle(order)
    tree_nodes, hubs = order[:tree_n], order[tree_n:]
    tree = []
    for i in range(1, tree_n):
        parent = tree_nodes[b.rng.randrange(i)]
        tree.append(edge_key(parent, tree_nodes[i]))
    degree = {v: 0 for v in tree_nodes}
    for u, v in tree:
        degree[u] += 1
        degree[v] += 1
    # terminals prefer leaves, then the rest in shuffled order
    ranked = sorted(tree_nodes, key=lambda v: (degree[v] > 1, tree_nodes.index(v)))
    terminals = ranked[: spec.num_terminals]
    for e in tree:
        b.add(*e, protect=True)
    b.hubs(hubs, terminals)
    for u in range(spec.n):
        for v in range(u + 1, spec.n):
            if b.rng.random() < spec.extra_edge_prob:
                b.add(u, v)
    return b.finish(terminals, tree)


def _example_tree(spec: GenSpec) -> InstanceFile:
    """The example tree; for ``k >= 2`` it becomes the bought base of a larger pool."""
    if spec.k == 1:
        return InstanceFile(9, 1, list(EXAMPLE_TERMINALS), [(u, v, 1) for u, v in EXAMPLE_EDGES])
    n = 9 + spec.k
    b = _Builder(spec, n)
    for u, v in EXAMPLE_EDGES:
        b.add(u, v, protect=True, cost=1)
    b.hubs(list(range(9, n)), list(EXAMPLE_TERMINALS))
    for u in range(9):
        for v in range(u + 1, 9):
            if b.rng.random() < spec.extra_edge_prob:
                b.add(u, v)
    return b.finish(EXAMPLE_TERMINALS, EXAMPLE_EDGES)


def generate(spec: GenSpec) -> InstanceFile:
    """Deterministic instance for ``spec``; identical specs give identical files."""
    if spec.model == "random-geometric":
        return _random_geometric(spec)
    if spec.model == "power-of-k-core":
        return _power_core(spec)
    return _padded_tree(spec)


def example_tree():
    """The example tree as a ``Graph`` with unit costs, and its terminals."""
    from .graph import Graph

    return Graph(9, [(u, v, 1) for u, v in EXAMPLE_EDGES]), EXAMPLE_TERMINALS
