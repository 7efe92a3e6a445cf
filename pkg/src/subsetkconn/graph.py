"""Undirected graphs and vertex-capacitated flow primitives.

Every vertex ``v`` is split into an in-node ``2v`` and an out-node ``2v+1``
joined by an internal arc of capacity 1 (effectively infinite for sources
and sinks). An undirected edge ``{u, v}`` becomes the arcs ``u_out -> v_in``
and ``v_out -> u_in``. Max-flow values on this network count openly
disjoint paths, and a minimum cut crosses internal arcs only, so it reads
off directly as a vertex cut.

Vertex sets used internally are Python ints (bit ``v`` set iff ``v`` is a
member); public functions return frozensets.
"""

from __future__ import annotations

import heapq
import numbers
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import InfeasibleError, InputError

Edge = tuple[int, int]


def edge_key(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def members(mask: int) -> frozenset[int]:
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return frozenset(out)


def _check_cost(c):
    if isinstance(c, bool) or not isinstance(c, numbers.Rational):
        if isinstance(c, float) and c.is_integer():
            return int(c)
        raise InputError(f"edge cost {c!r} is not an exact integer or rational")
    if c < 0:
        raise InputError(f"negative edge cost {c}")
    return c


class Graph:
    """Immutable undirected simple graph on vertices ``0..n-1`` with edge costs."""

    __slots__ = ("n", "_cost", "adj", "adj_mask")

    def __init__(self, n: int, edges: Iterable = ()):
        if n < 0:
            raise InputError("vertex count must be non-negative")
        cost: dict[Edge, numbers.Rational] = {}
        for item in edges:
            if len(item) == 2:
                u, v = item
                c = 0
            else:
                u, v, c = item
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f"edge ({u}, {v}) has a vertex outside [0, {n})")
            if u == v:
                raise InputError(f"self-loop at vertex {u}")
            key = edge_key(u, v)
            if key in cost:
                raise InputError(f"duplicate edge {key}")
            cost[key] = _check_cost(c)
        adj: list[list[int]] = [[] for _ in range(n)]
        for u, v in cost:
            adj[u].append(v)
            adj[v].append(u)
        self.n = n
        self._cost = cost
        self.adj = tuple(tuple(sorted(a)) for a in adj)
        self.adj_mask = tuple(mask_of(a) for a in self.adj)

    # -- basic queries -------------------------------------------------
    @property
    def edges(self) -> list[tuple[int, int, numbers.Rational]]:
        return [(u, v, self._cost[(u, v)]) for u, v in sorted(self._cost)]

    @property
    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self._cost)

    @property
    def num_edges(self) -> int:
        return len(self._cost)

    def has_edge(self, u: int, v: int) -> bool:
        return edge_key(u, v) in self._cost

    def cost(self, u: int, v: int):
        return self._cost[edge_key(u, v)]

    def cost_of(self, edges: Iterable[Edge]):
        """Total cost of an edge collection (each edge counted once)."""
        keys = {edge_key(*e) for e in edges}
        return sum((self._cost[k] for k in keys), 0)

    def check_vertex(self, v: int) -> None:
        if not isinstance(v, numbers.Integral) or not 0 <= v < self.n:
            raise InputError(f"vertex id {v!r} outside [0, {self.n})")

    def check_edges(self, edges: Iterable[Edge]) -> frozenset[Edge]:
        keys = frozenset(edge_key(*e) for e in edges)
        unknown = keys - self._cost.keys()
        if unknown:
            raise InputError(f"edges not in graph: {sorted(unknown)[:5]}")
        return keys

    # -- derived graphs ------------------------------------------------
    def subgraph(self, edges: Iterable[Edge]) -> "Graph":
        keys = self.check_edges(edges)
        return Graph(self.n, ((u, v, self._cost[(u, v)]) for u, v in sorted(keys)))

    def extended(self, extra_vertices: int, extra_edges: Iterable = ()) -> "Graph":
        """Copy with ``extra_vertices`` new vertices and additional edges."""
        return Graph(self.n + extra_vertices, list(self.edges) + list(extra_edges))

    def __eq__(self, other):
        return isinstance(other, Graph) and self.n == other.n and self._cost == other._cost

    def __hash__(self):
        return hash((self.n, frozenset(self._cost.items())))

    def __repr__(self):
        return f"Graph(n={self.n}, m={len(self._cost)})"


@dataclass(frozen=True)
class PathBundle:
    """A family of openly disjoint s,t-paths."""

    s: int
    t: int
    paths: tuple[tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return len(self.paths)


# ---------------------------------------------------------------------------
# Max-flow on the split network
# ---------------------------------------------------------------------------


class SplitNetwork:
    """Residual network of the node-splitting transform.

    ``sources`` and ``sink`` are uncuttable (internal arcs of capacity
    ``n + 1``). Flow is pushed from all source vertices at once, which is
    how a vertex set gets contracted to a super-source.
    """

    def __init__(self, g: Graph, sources: Iterable[int], sink: int, skip_edge: Edge | None = None):
        self.g = g
        self.sources = sorted(set(sources))
        self.sink = sink
        big = g.n + 1
        self.big = big
        nn = 2 * g.n
        self.out: list[list[int]] = [[] for _ in range(nn)]
        self.head: list[int] = []
        self.cap: list[int] = []
        self.orig: list[int] = []
        hard = set(self.sources)
        hard.add(sink)
        for v in range(g.n):
            self._arc(2 * v, 2 * v + 1, big if v in hard else 1)
        for u, v in sorted(g._cost):
            if skip_edge is not None and (u, v) == skip_edge:
                continue
            self._arc(2 * u + 1, 2 * v, big)
            self._arc(2 * v + 1, 2 * u, big)
        self.value = 0

    def _arc(self, a: int, b: int, c: int) -> None:
        self.out[a].append(len(self.head))
        self.head.append(b)
        self.cap.append(c)
        self.orig.append(c)
        self.out[b].append(len(self.head))
        self.head.append(a)
        self.cap.append(0)
        self.orig.append(0)

    def _source_nodes(self) -> list[int]:
        nodes = []
        for v in self.sources:
            nodes.append(2 * v)
            nodes.append(2 * v + 1)
        return nodes

    def augment(self) -> bool:
        target = 2 * self.sink
        parent = [-1] * len(self.out)
        seen = bytearray(len(self.out))
        dq = deque()
        for x in self._source_nodes():
            seen[x] = 1
            dq.append(x)
        head, cap, out = self.head, self.cap, self.out
        found = False
        while dq and not found:
            x = dq.popleft()
            for a in out[x]:
                if cap[a] > 0:
                    y = head[a]
                    if not seen[y]:
                        seen[y] = 1
                        parent[y] = a
                        if y == target:
                            found = True
                            break
                        dq.append(y)
        if not found:
            return False
        # bottleneck is 1 unless the sink touches the source set directly
        push = self.big
        y = target
        while parent[y] != -1:
            a = parent[y]
            push = min(push, cap[a])
            y = head[a ^ 1]
        y = target
        while parent[y] != -1:
            a = parent[y]
            cap[a] -= push
            cap[a ^ 1] += push
            y = head[a ^ 1]
        self.value += push
        return True

    def run(self, limit: int | None = None) -> int:
        while limit is None or self.value < limit:
            if not self.augment():
                break
        return self.value

    def closure(self, seeds: Iterable[int] = (), base: bytearray | None = None) -> bytearray | None:
        """Residual-reachable node marks from the sources plus ``seeds`` (vertex ids).

        Returns ``None`` if the sink's in-node becomes reachable. ``base`` is a
        previously computed closure to extend.
        """
        seen = bytearray(base) if base is not None else bytearray(len(self.out))
        dq = deque()
        start = [] if base is not None else self._source_nodes()
        for v in seeds:
            start.append(2 * v)
            start.append(2 * v + 1)
        for x in start:
            if not seen[x]:
                seen[x] = 1
                dq.append(x)
        target = 2 * self.sink
        if seen[target]:
            return None
        head, cap, out = self.head, self.cap, self.out
        while dq:
            x = dq.popleft()
            for a in out[x]:
                if cap[a] > 0:
                    y = head[a]
                    if not seen[y]:
                        if y == target:
                            return None
                        seen[y] = 1
                        dq.append(y)
        return seen

    def coreachable(self) -> bytearray:
        """Nodes that can still reach the sink's in-node in the residual network."""
        seen = bytearray(len(self.out))
        target = 2 * self.sink
        seen[target] = 1
        dq = deque([target])
        head, cap, out = self.head, self.cap, self.out
        while dq:
            y = dq.popleft()
            for a in out[y]:
                # arc a is y->x; its reverse a^1 is x->y
                if cap[a ^ 1] > 0:
                    x = head[a]
                    if not seen[x]:
                        seen[x] = 1
                        dq.append(x)
        return seen

    @staticmethod
    def side_mask(marks: bytearray) -> int:
        """Vertices whose out-node is marked (both split nodes on the marked side)."""
        m = 0
        for v in range(len(marks) // 2):
            if marks[2 * v + 1]:
                m |= 1 << v
        return m

    @staticmethod
    def sink_side_mask(co: bytearray) -> int:
        """Vertices whose in-node can reach the sink."""
        m = 0
        for v in range(len(co) // 2):
            if co[2 * v]:
                m |= 1 << v
        return m

    def paths(self) -> list[tuple[int, ...]]:
        """Decompose the current flow into vertex sequences (single-source use)."""
        flow = [o - c if o > 0 else 0 for o, c in zip(self.orig, self.cap)]
        target = 2 * self.sink
        result = []
        for s in self.sources:
            start = 2 * s + 1
            while True:
                node = start
                walk = [s]
                ok = False
                while True:
                    nxt = None
                    for a in self.out[node]:
                        if flow[a] > 0 and self.orig[a] > 0:
                            nxt = a
                            break
                    if nxt is None:
                        break
                    flow[nxt] -= 1
                    node = self.head[nxt]
                    v = node // 2
                    if v != walk[-1]:
                        walk.append(v)
                    if node == target:
                        ok = True
                        break
                if not ok:
                    break
                result.append(tuple(walk))
        return result


def _check_pair(g: Graph, s: int, t: int) -> None:
    g.check_vertex(s)
    g.check_vertex(t)
    if s == t:
        raise InputError("s and t must differ")


def local_connectivity(g: Graph, s: int, t: int, limit: int | None = None) -> int:
    """Number of openly disjoint s,t-paths, capped at ``limit`` if given.

    A direct s--t edge counts as one path.
    """
    _check_pair(g, s, t)
    adjacent = g.has_edge(s, t)
    bonus = 1 if adjacent else 0
    if limit is not None and bonus >= limit:
        return limit
    net = SplitNetwork(g, [s], t, skip_edge=edge_key(s, t) if adjacent else None)
    return bonus + net.run(None if limit is None else limit - bonus)


def max_openly_disjoint_paths(g: Graph, s: int, t: int) -> PathBundle:
    """Maximum family of openly disjoint s,t-paths (Menger oracle)."""
    _check_pair(g, s, t)
    adjacent = g.has_edge(s, t)
    net = SplitNetwork(g, [s], t, skip_edge=edge_key(s, t) if adjacent else None)
    net.run()
    paths = net.paths()
    if adjacent:
        paths.insert(0, (s, t))
    return PathBundle(s, t, tuple(paths))


def min_cut_side(g: Graph, s: int, t: int) -> tuple[frozenset[int], frozenset[int]]:
    """Minimum s,t vertex cut together with its inclusion-minimal s-side.

    Raises ``InputError`` when s and t are adjacent, since no vertex set
    separates them.
    """
    _check_pair(g, s, t)
    if g.has_edge(s, t):
        raise InputError("no separating vertex cut exists: s and t are adjacent")
    net = SplitNetwork(g, [s], t)
    net.run()
    marks = net.closure()
    side = SplitNetwork.side_mask(marks)
    cut = neighbor_mask(g, side)
    assert bin(cut).count("1") == net.value
    return members(cut), members(side)


def neighbor_mask(g: Graph, u: int) -> int:
    nb = 0
    m = u
    adj = g.adj_mask
    while m:
        low = m & -m
        nb |= adj[low.bit_length() - 1]
        m ^= low
    return nb & ~u


# ---------------------------------------------------------------------------
# Min-cost openly disjoint paths (successive shortest paths with potentials)
# ---------------------------------------------------------------------------


class _CostNetwork:
    def __init__(self, g: Graph, s: int, t: int, free: frozenset[Edge]):
        nn = 2 * g.n
        self.out: list[list[int]] = [[] for _ in range(nn)]
        self.head: list[int] = []
        self.cap: list[int] = []
        self.orig: list[int] = []
        self.cost: list = []
        self.edge_of: list[Edge | None] = []
        big = g.n + 1
        for v in range(g.n):
            self._arc(2 * v, 2 * v + 1, big if v in (s, t) else 1, 0, None)
        self.edge_start = len(self.head)
        for (u, v), c in sorted(g._cost.items()):
            w = 0 if (u, v) in free else c
            self._arc(2 * u + 1, 2 * v, 1, w, (u, v))
            self._arc(2 * v + 1, 2 * u, 1, w, (u, v))

    def _arc(self, a, b, c, w, e):
        self.out[a].append(len(self.head))
        self.head.append(b)
        self.cap.append(c)
        self.orig.append(c)
        self.cost.append(w)
        self.edge_of.append(e)
        self.out[b].append(len(self.head))
        self.head.append(a)
        self.cap.append(0)
        self.orig.append(0)
        self.cost.append(-w)
        self.edge_of.append(e)

    def path_edges(self, s: int, t: int) -> set[Edge]:
        """Edges on the s,t-paths of the flow; stray flow cycles are dropped."""
        flow = [o - c if o > 0 else 0 for o, c in zip(self.orig, self.cap)]
        # opposite unit arcs on one edge cancel
        for a in range(self.edge_start, len(flow), 4):
            e = self.edge_of[a]
            if e is not None and flow[a] and flow[a + 2]:
                flow[a] = flow[a + 2] = 0
        used: set[Edge] = set()
        target = 2 * t
        while True:
            node = 2 * s + 1
            walk: list[int] = []
            while node != target:
                nxt = next((a for a in self.out[node] if flow[a] > 0), None)
                if nxt is None:
                    break
                flow[nxt] -= 1
                walk.append(nxt)
                node = self.head[nxt]
            if node != target:
                break
            used.update(self.edge_of[a] for a in walk if self.edge_of[a] is not None)
        return used

    def flow(self, src: int, dst: int, k: int):
        nn = len(self.out)
        pot = [0] * nn
        total = 0
        sent = 0
        head, cap, cost, out = self.head, self.cap, self.cost, self.out
        while sent < k:
            dist: list = [None] * nn
            par = [-1] * nn
            dist[src] = 0
            heap = [(0, src)]
            while heap:
                d, x = heapq.heappop(heap)
                if d != dist[x]:
                    continue
                px = pot[x]
                for a in out[x]:
                    if cap[a] > 0:
                        y = head[a]
                        nd = d + cost[a] + px - pot[y]
                        if dist[y] is None or nd < dist[y]:
                            dist[y] = nd
                            par[y] = a
                            heapq.heappush(heap, (nd, y))
            if dist[dst] is None:
                break
            for x in range(nn):
                if dist[x] is not None:
                    pot[x] += dist[x]
            y = dst
            while y != src:
                a = par[y]
                cap[a] -= 1
                cap[a ^ 1] += 1
                total += cost[a]
                y = head[a ^ 1]
            sent += 1
        return sent, total


def min_cost_disjoint_paths(
    g: Graph, s: int, t: int, k: int, free_edges: Iterable[Edge] = frozenset()
) -> frozenset[Edge]:
    """Cheapest edge set carrying ``k`` openly disjoint s,t-paths.

    Edges in ``free_edges`` are priced at zero. The cost of the returned set
    (ignoring free edges) equals the min-cost flow value.
    """
    _check_pair(g, s, t)
    if k < 0:
        raise InputError("k must be non-negative")
    if k == 0:
        return frozenset()
    free = frozenset(edge_key(*e) for e in free_edges)
    net = _CostNetwork(g, s, t, free)
    sent, _ = net.flow(2 * s + 1, 2 * t, k)
    if sent < k:
        raise InfeasibleError(
            f"only {sent} openly disjoint paths between {s} and {t}, need {k}",
            witness=(s, t),
            achieved=sent,
        )
    return frozenset(net.path_edges(s, t))


def iter_pairs(items) -> Iterator[tuple[int, int]]:
    items = sorted(items)
    for i, a in enumerate(items):
        for b in items[i + 1 :]:
            yield a, b


__all__ = [
    "Edge",
    "Graph",
    "PathBundle",
    "SplitNetwork",
    "edge_key",
    "iter_pairs",
    "local_connectivity",
    "mask_of",
    "max_openly_disjoint_paths",
    "members",
    "min_cost_disjoint_paths",
    "min_cut_side",
    "neighbor_mask",
]
