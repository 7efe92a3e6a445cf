"""Subset and rooted connectivity oracles, and deficient sets.

A deficient set (with respect to a target connectivity) is a vertex set
``U`` such that ``U`` and its vertex-complement ``V - (U + N(U))`` both
contain terminals while ``|N(U)|`` is below the target. The brute-force
enumerator here is the reference every flow-based routine is checked
against; it scans all ``2^n`` subsets with numpy bit arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import InputError, SizeLimitError
from .graph import Graph, iter_pairs, local_connectivity, mask_of, members, neighbor_mask

BRUTE_FORCE_BOUND = 18


def as_terminals(g: Graph, terminals: Iterable[int], min_size: int = 2) -> tuple[int, ...]:
    ts = tuple(sorted(set(terminals)))
    for v in ts:
        g.check_vertex(v)
    if len(ts) < min_size:
        raise InputError(f"need at least {min_size} terminals, got {len(ts)}")
    return ts


@dataclass(frozen=True)
class DeficientSet:
    members: frozenset[int]
    neighbors: frozenset[int]
    complement: frozenset[int]
    terminal_count_inside: int
    terminal_count_outside: int

    @property
    def is_small(self) -> bool:
        return self.terminal_count_inside <= self.terminal_count_outside

    @classmethod
    def from_mask(cls, g: Graph, tmask: int, mask: int) -> "DeficientSet":
        nb = neighbor_mask(g, mask)
        comp = ((1 << g.n) - 1) & ~(mask | nb)
        return cls(
            members(mask),
            members(nb),
            members(comp),
            bin(mask & tmask).count("1"),
            bin(comp & tmask).count("1"),
        )


def neighbors(g: Graph, u: Iterable[int]) -> frozenset[int]:
    """Vertices outside ``u`` adjacent to some vertex of ``u``."""
    m = mask_of(u)
    if m >> g.n:
        raise InputError("vertex set has ids outside the graph")
    return members(neighbor_mask(g, m))


def complement_mask(g: Graph, mask: int) -> int:
    return ((1 << g.n) - 1) & ~(mask | neighbor_mask(g, mask))


def weakest_pair(g: Graph, terminals: Iterable[int], limit: int | None = None):
    """Return ``(value, pair)`` minimising openly disjoint paths over terminal pairs.

    With ``limit`` the search stops early once a pair below the limit is
    known not to matter: values are capped at ``limit`` and ``pair`` is None
    when every pair reaches it.
    """
    ts = as_terminals(g, terminals)
    best = limit
    best_pair = None
    for s, t in iter_pairs(ts):
        val = local_connectivity(g, s, t, best)
        if best is None or val < best:
            best, best_pair = val, (s, t)
            if best == 0:
                break
    return best, best_pair


def subset_connectivity(g: Graph, terminals: Iterable[int], limit: int | None = None) -> int:
    """Largest ``l`` such that every terminal pair has ``l`` openly disjoint paths."""
    return weakest_pair(g, terminals, limit)[0]


def rooted_connectivity(g: Graph, root: int, terminals: Iterable[int], limit: int | None = None) -> int:
    """Largest ``l`` such that the root has ``l`` openly disjoint paths to every terminal."""
    g.check_vertex(root)
    ts = [t for t in as_terminals(g, terminals, min_size=0) if t != root]
    best = limit
    for t in ts:
        val = local_connectivity(g, root, t, best)
        if best is None or val < best:
            best = val
            if best == 0:
                break
    if best is None:
        # no terminal other than the root: vacuously connected
        return limit if limit is not None else g.n
    return best


def exists_deficient_set(g: Graph, terminals: Iterable[int], target: int) -> bool:
    """True iff some vertex set with fewer than ``target`` neighbours separates two terminals.

    Adjacent terminals can never be separated, so only non-adjacent pairs
    are probed.
    """
    if target <= 0:
        return False
    ts = as_terminals(g, terminals)
    for s, t in iter_pairs(ts):
        if g.has_edge(s, t):
            continue
        if local_connectivity(g, s, t, target) < target:
            return True
    return False


# ---------------------------------------------------------------------------
# Brute-force reference
# ---------------------------------------------------------------------------


def _subset_tables(g: Graph, bound: int):
    n = g.n
    if n > bound:
        raise SizeLimitError(f"brute-force enumeration limited to {bound} vertices, graph has {n}")
    size = 1 << n
    masks = np.arange(size, dtype=np.int64)
    nb = np.zeros(size, dtype=np.int64)
    for i in range(n):
        lo = 1 << i
        nb[lo : 2 * lo] = nb[:lo] | g.adj_mask[i]
    nb &= ~masks
    comp = (size - 1) & ~(masks | nb)
    return masks, nb, comp


def deficient_masks(g: Graph, terminals: Iterable[int], target: int, bound: int = BRUTE_FORCE_BOUND):
    """All deficient sets as arrays ``(mask, inside, outside)`` of terminal counts."""
    ts = as_terminals(g, terminals)
    tmask = mask_of(ts)
    masks, nb, comp = _subset_tables(g, bound)
    inside = np.bitwise_count(masks & tmask)
    outside = np.bitwise_count(comp & tmask)
    sel = (inside > 0) & (outside > 0) & (np.bitwise_count(nb) < target)
    return masks[sel], inside[sel].astype(np.int64), outside[sel].astype(np.int64)


def enumerate_deficient_sets(
    g: Graph, terminals: Iterable[int], target: int, bound: int = BRUTE_FORCE_BOUND
) -> list[DeficientSet]:
    """Every deficient set of ``g``, by exhaustive subset scan (``n <= bound``)."""
    ts = as_terminals(g, terminals)
    tmask = mask_of(ts)
    found, _, _ = deficient_masks(g, ts, target, bound)
    return [DeficientSet.from_mask(g, tmask, int(m)) for m in found]


def smallest_deficient_size(g: Graph, terminals: Iterable[int], target: int, bound: int = BRUTE_FORCE_BOUND):
    """Fewest terminals inside any deficient set, or None if there is none."""
    _, inside, _ = deficient_masks(g, terminals, target, bound)
    return int(inside.min()) if len(inside) else None
