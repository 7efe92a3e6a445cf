"""Reduction from rooted subset k-connectivity to subset k-connectivity.

The root ``r`` with neighbours ``v_1..v_d`` is replaced by a zero-cost
clique on ``r', v'_1..v'_d``; each ``v'_i`` is joined to ``v_i`` at the cost
of the old edge ``(r, v_i)``, and ``r'`` becomes a terminal. The new root
``r'`` reuses the id of ``r``; the ``v'_i`` get ids ``n..n+d-1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .connectivity import as_terminals, rooted_connectivity
from .errors import InfeasibleError, InputError
from .graph import Edge, Graph, edge_key, iter_pairs
from .oracle import verify_solution
from .solver import Instance


@dataclass(frozen=True)
class RootedInstance:
    graph: Graph
    terminals: tuple[int, ...]
    root: int
    k: int
    purchased: frozenset[Edge] = frozenset()

    def __post_init__(self):
        self.graph.check_vertex(self.root)
        ts = as_terminals(self.graph, self.terminals, min_size=1)
        if self.root in ts:
            raise InputError(f"root {self.root} must not be a terminal")
        if self.k < 1:
            raise InputError("k must be at least 1")
        object.__setattr__(self, "terminals", ts)
        object.__setattr__(self, "purchased", self.graph.check_edges(self.purchased))

    def is_feasible(self, edges: Iterable[Edge]) -> bool:
        sub = self.graph.subgraph(edges)
        return rooted_connectivity(sub, self.root, self.terminals, self.k) >= self.k


@dataclass(frozen=True)
class ReductionMap:
    root: int
    neighbors: tuple[int, ...]
    clique_vertices: tuple[int, ...]
    clique_edges: frozenset[Edge]
    # connector (v'_i, v_i) -> root edge (r, v_i)
    edge_correspondence: dict[Edge, Edge]

    @property
    def new_root(self) -> int:
        return self.clique_vertices[0]

    @property
    def connector_of(self) -> dict[Edge, Edge]:
        return {orig: conn for conn, orig in self.edge_correspondence.items()}


def rooted_to_subset(rooted: RootedInstance) -> tuple[Instance, ReductionMap]:
    g, r = rooted.graph, rooted.root
    nbrs = tuple(sorted(g.adj[r]))
    if not nbrs:
        raise InputError(f"root {r} has no neighbours")
    d = len(nbrs)
    copies = tuple(range(g.n, g.n + d))
    clique = (r,) + copies
    edges = [(u, v, c) for u, v, c in g.edges if r not in (u, v)]
    clique_edges = frozenset(iter_pairs(clique))
    edges += [(a, b, 0) for a, b in sorted(clique_edges)]
    corr: dict[Edge, Edge] = {}
    for v, vc in zip(nbrs, copies):
        edges.append((v, vc, g.cost(r, v)))
        corr[edge_key(v, vc)] = edge_key(r, v)
    big = Graph(g.n + d, edges)
    rmap = ReductionMap(r, nbrs, clique, clique_edges, corr)
    purchased = _forward_edges(rooted.purchased, rmap) | clique_edges
    inst = Instance(big, rooted.terminals + (r,), rooted.k, purchased)
    return inst, rmap


def _forward_edges(h: Iterable[Edge], rmap: ReductionMap) -> frozenset[Edge]:
    conn = rmap.connector_of
    return frozenset(conn.get(edge_key(*e), edge_key(*e)) for e in h)


def map_solution_forward(rooted: RootedInstance, rmap: ReductionMap, h: Iterable[Edge]) -> frozenset[Edge]:
    """Image of a rooted solution: every clique edge plus the correspondents of ``h``."""
    h = rooted.graph.check_edges(h)
    if not rooted.is_feasible(h):
        raise InfeasibleError("edge set is not rooted k-connected")
    return rmap.clique_edges | _forward_edges(h, rmap)


def map_solution_back(inst: Instance, rmap: ReductionMap, h_prime: Iterable[Edge]) -> frozenset[Edge]:
    """Preimage of a subset solution: drop clique edges, turn connectors back into root edges."""
    h_prime = inst.graph.check_edges(h_prime)
    cert = verify_solution(inst.graph, inst.terminals, inst.k, h_prime)
    if not cert.passed:
        raise InfeasibleError(
            f"edge set is not subset {inst.k}-connected (pair {cert.witness})",
            witness=cert.witness,
            achieved=cert.min_connectivity,
        )
    return frozenset(rmap.edge_correspondence.get(e, e) for e in h_prime - rmap.clique_edges)
