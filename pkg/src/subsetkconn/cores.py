"""Cores, halo-families, halo-sets and terminal thickness.

For a graph in which the terminals are ``l``-connected, deficient sets are
taken with respect to ``l + 1``. A core is an inclusion-minimal small
deficient set; the halo-family of a core ``C`` collects the small deficient
sets containing ``C`` and no other core, and the halo-set is their union.

Flow-based computation
----------------------
Cores: every core is the minimal source side of a minimum vertex cut of
value ``l`` between a terminal inside it and a terminal in its
vertex-complement. So the cores are exactly the inclusion-minimal small
sets among the minimal cut sides of all terminal pairs with local
connectivity ``l``.

Halo-sets: fix a core ``C`` and a terminal ``tau`` outside ``C + N(C)``.
The deficient sets containing ``C`` with ``tau`` in their complement are
the closed sets of the residual network of a max flow from ``C`` to
``tau``. Being small and containing no other core are both inherited by
subsets, so a vertex ``v`` lies in ``H(C)`` iff, for some ``tau``, the
smallest closed set containing ``C + v`` passes both tests.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .connectivity import BRUTE_FORCE_BOUND, DeficientSet, as_terminals, deficient_masks
from .errors import GuardViolation, InputError, StateError
from .graph import Graph, SplitNetwork, iter_pairs, mask_of, members, neighbor_mask


def _popcount(m: int) -> int:
    return bin(m).count("1")


@dataclass(frozen=True)
class CoreRecord:
    core: frozenset[int]
    halo_set: frozenset[int]
    halo_neighbors: frozenset[int]
    halo_complement: frozenset[int]
    witness_family_size: int | None = field(default=None, compare=False)

    @cached_property
    def core_mask(self) -> int:
        return mask_of(self.core)

    @cached_property
    def halo_mask(self) -> int:
        return mask_of(self.halo_set)

    @cached_property
    def neighbor_mask(self) -> int:
        return mask_of(self.halo_neighbors)

    @cached_property
    def complement_mask(self) -> int:
        return mask_of(self.halo_complement)

    @classmethod
    def build(cls, g: Graph, core_mask: int, halo_mask: int, family_size: int | None = None) -> "CoreRecord":
        nb = neighbor_mask(g, halo_mask)
        comp = ((1 << g.n) - 1) & ~(halo_mask | nb)
        return cls(members(core_mask), members(halo_mask), members(nb), members(comp), family_size)


def _core_order(mask: int) -> tuple[int, ...]:
    return tuple(sorted(members(mask)))


class _Context:
    """Per-graph helpers shared by the core and halo computations."""

    def __init__(self, g: Graph, terminals: Sequence[int], level: int):
        self.g = g
        self.terminals = tuple(terminals)
        self.tmask = mask_of(terminals)
        self.level = level
        self.full = (1 << g.n) - 1

    def complement(self, mask: int) -> int:
        return self.full & ~(mask | neighbor_mask(self.g, mask))

    def is_small(self, mask: int) -> bool:
        return _popcount(mask & self.tmask) <= _popcount(self.complement(mask) & self.tmask)


def _core_candidates(ctx: _Context) -> list[int]:
    g, level = ctx.g, ctx.level
    found: set[int] = set()
    for s, t in iter_pairs(ctx.terminals):
        if g.has_edge(s, t):
            continue
        net = SplitNetwork(g, [s], t)
        val = net.run(level + 1)
        if val < level:
            raise StateError(
                f"terminals {s} and {t} have only {val} openly disjoint paths; graph is not subset {level}-connected"
            )
        if val > level:
            continue
        found.add(SplitNetwork.side_mask(net.closure()))
        found.add(SplitNetwork.sink_side_mask(net.coreachable()))
    return [m for m in found if ctx.is_small(m)]


def _minimal(masks: Iterable[int]) -> list[int]:
    chosen: list[int] = []
    for m in sorted(set(masks), key=lambda x: (_popcount(x), _core_order(x))):
        if not any(c & m == c for c in chosen):
            chosen.append(m)
    return sorted(chosen, key=_core_order)


def compute_core_masks(g: Graph, terminals: Iterable[int], level: int) -> list[int]:
    ts = as_terminals(g, terminals)
    return _minimal(_core_candidates(_Context(g, ts, level)))


def compute_cores(g: Graph, terminals: Iterable[int], level: int) -> list[frozenset[int]]:
    """All cores of a subset ``level``-connected graph, sorted by member tuple.

    Raises ``StateError`` if some terminal pair has fewer than ``level``
    openly disjoint paths. Returns an empty list when the graph is already
    subset ``(level + 1)``-connected.
    """
    return [members(m) for m in compute_core_masks(g, terminals, level)]


def _halo_mask(ctx: _Context, core: int, others: list[int]) -> int:
    g, level = ctx.g, ctx.level

    def ok(u: int) -> bool:
        if not ctx.is_small(u):
            return False
        return not any(d & u == d for d in others)

    halo = core
    blocked = core | neighbor_mask(g, core)
    sources = sorted(members(core))
    for tau in ctx.terminals:
        if blocked >> tau & 1:
            continue
        net = SplitNetwork(g, sources, tau)
        val = net.run(level + 1)
        if val > level:
            continue
        if val < level:
            raise StateError(f"core {sources} and terminal {tau} are less than {level}-connected")
        # largest closed set; every candidate set lies inside it
        upper = ctx.full & ~SplitNetwork.side_mask(net.coreachable())
        if ok(upper):
            halo |= upper
            continue
        base = net.closure()
        lower = SplitNetwork.side_mask(base)
        if not ok(lower):
            # everything in this lattice contains the lower set, so nothing qualifies
            continue
        halo |= lower
        rest = upper & ~halo
        while rest:
            low = rest & -rest
            rest ^= low
            v = low.bit_length() - 1
            if halo >> v & 1:
                continue
            marks = net.closure([v], base)
            if marks is None:
                continue
            u = SplitNetwork.side_mask(marks)
            if ok(u):
                halo |= u
    return halo


def compute_halo_set(
    g: Graph,
    terminals: Iterable[int],
    level: int,
    core: Iterable[int],
    all_cores: Sequence[Iterable[int]],
) -> CoreRecord:
    """Halo-set of ``core`` given the full list of cores."""
    ts = as_terminals(g, terminals)
    cm = mask_of(core)
    core_masks = [mask_of(c) for c in all_cores]
    if cm not in core_masks:
        raise InputError(f"{sorted(members(cm))} is not among the given cores")
    ctx = _Context(g, ts, level)
    others = [d for d in core_masks if d != cm]
    return CoreRecord.build(g, cm, _halo_mask(ctx, cm, others))


def compute_core_records(g: Graph, terminals: Iterable[int], level: int, check: bool = True) -> list[CoreRecord]:
    """Cores with their halo-sets; checks ``|N(H(C))| <= level`` when ``check``."""
    ts = as_terminals(g, terminals)
    ctx = _Context(g, ts, level)
    cores = _minimal(_core_candidates(ctx))
    records = []
    for cm in cores:
        others = [d for d in cores if d != cm]
        rec = CoreRecord.build(g, cm, _halo_mask(ctx, cm, others))
        if check and len(rec.halo_neighbors) > level:
            raise GuardViolation(
                f"halo-set of core {sorted(rec.core)} has {len(rec.halo_neighbors)} neighbours, more than {level}"
            )
        records.append(rec)
    return records


def halo_family_member(u: DeficientSet, core: Iterable[int], all_cores: Sequence[Iterable[int]]) -> bool:
    """Whether small deficient set ``u`` belongs to the halo-family of ``core``."""
    um = mask_of(u.members)
    cm = mask_of(core)
    if cm & um != cm:
        return False
    for d in all_cores:
        dm = mask_of(d)
        if dm != cm and dm & um == dm:
            return False
    return True


def hits(s: Iterable[int], record: CoreRecord) -> bool:
    """A terminal hits a halo-family if it lies in the core or in the halo complement."""
    target = record.core_mask | record.complement_mask
    return any(target >> r & 1 for r in s)


@dataclass(frozen=True)
class ThicknessTable:
    counts: dict[int, int]
    q: int

    @property
    def min_terminal(self) -> int:
        return min(self.counts, key=lambda t: (self.counts[t], t))

    @property
    def min_thickness(self) -> int:
        return self.counts[self.min_terminal]


def thickness_table(records: Sequence[CoreRecord], terminals: Iterable[int]) -> ThicknessTable:
    """Per-terminal count of halo-sets having the terminal as a neighbour."""
    ts = sorted(set(terminals))
    counts = {t: 0 for t in ts}
    for rec in records:
        nb = rec.neighbor_mask
        for t in ts:
            if nb >> t & 1:
                counts[t] += 1
    return ThicknessTable(counts, len(records))


def halo_membership_counts(records: Sequence[CoreRecord], terminals: Iterable[int]) -> dict[int, int]:
    """For each terminal, the number of halo-sets that contain it."""
    return {t: sum(1 for r in records if r.halo_mask >> t & 1) for t in sorted(set(terminals))}


def halo_membership_bound(num_terminals: int, level: int) -> float:
    return 2 * (num_terminals - 1) / (num_terminals - level)


# ---------------------------------------------------------------------------
# Brute-force reference
# ---------------------------------------------------------------------------


class BruteForceStructure:
    """Cores and halo-families of ``g`` read off the full deficient-set list."""

    def __init__(self, g: Graph, terminals: Iterable[int], level: int, bound: int = BRUTE_FORCE_BOUND):
        ts = as_terminals(g, terminals)
        self.g = g
        self.terminals = ts
        self.level = level
        masks, inside, outside = deficient_masks(g, ts, level + 1, bound)
        self.deficient = masks
        small = masks[inside <= outside]
        self.small = small
        order = np.lexsort((small, np.bitwise_count(small)))
        remaining = small[order]
        cores = []
        while len(remaining):
            c = int(remaining[0])
            cores.append(c)
            remaining = remaining[(remaining & c) != c]
        self.core_masks = sorted(cores, key=_core_order)

    @property
    def cores(self) -> list[frozenset[int]]:
        return [members(c) for c in self.core_masks]

    def family(self, core_mask: int) -> list[int]:
        sel = (self.small & core_mask) == core_mask
        for d in self.core_masks:
            if d != core_mask:
                sel &= (self.small & d) != d
        return [int(m) for m in self.small[sel]]

    def records(self) -> list[CoreRecord]:
        out = []
        for c in self.core_masks:
            fam = self.family(c)
            halo = 0
            for m in fam:
                halo |= m
            out.append(CoreRecord.build(self.g, c, halo, len(fam)))
        return out
