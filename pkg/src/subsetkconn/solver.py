"""Subset k-connectivity solver.

Dispatch by the number of terminals:

* ``|T| < 2k``: pairwise min-cost disjoint paths (``trivial``); the
  iterative algorithm can be forced (``below2k``).
* ``2k <= |T| < k^2``: iterative augmentation with micro iterations
  (``moderate``).
* ``|T| >= k^2`` (and ``|T| >= 2k``): iterative augmentation with a single
  hitting round (``large``).

The iterative algorithm raises subset connectivity one level at a time.
Each level first pads a root onto ``l + 1`` terminals to thin out the
cores, then repeats inner iterations: compute cores and halo-sets, pick a
hitting set of terminals guided by thickness, and augment rooted
connectivity from each chosen terminal.

Structural guarantees are checked at runtime through ``Guards``; the
exhaustive ones only run when the graph is small enough for enumeration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

from .connectivity import (
    BRUTE_FORCE_BOUND,
    as_terminals,
    smallest_deficient_size,
    subset_connectivity,
    weakest_pair,
)
from .cores import (
    BruteForceStructure,
    CoreRecord,
    compute_core_records,
    halo_membership_bound,
    halo_membership_counts,
    hits,
    thickness_table,
)
from .errors import GuardViolation, InfeasibleError, InputError
from .graph import Edge, Graph, edge_key, iter_pairs, mask_of, min_cost_disjoint_paths
from .oracle import Certificate, verify_solution
from .rooted import RootedAugmentRequest, augment_rooted, padded_graph, root_pad

ASSERT_LEVELS = ("off", "oracle", "always")
DISPATCH_MODES = ("auto", "trivial", "iterative", "cheapest")


@dataclass(frozen=True)
class Instance:
    graph: Graph
    terminals: tuple[int, ...]
    k: int
    purchased: frozenset[Edge] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "terminals", as_terminals(self.graph, self.terminals))
        object.__setattr__(self, "purchased", self.graph.check_edges(self.purchased))
        if self.k < 1:
            raise InputError("k must be at least 1")


@dataclass(frozen=True)
class SolverConfig:
    dispatch: str = "auto"
    strategy: str = "per-terminal"
    assert_level: str = "oracle"
    oracle_bound: int = 12
    preprocess: bool = True
    seed: int | None = None

    def __post_init__(self):
        if self.dispatch not in DISPATCH_MODES:
            raise InputError(f"dispatch must be one of {DISPATCH_MODES}")
        if self.assert_level not in ASSERT_LEVELS:
            raise InputError(f"assert level must be one of {ASSERT_LEVELS}")


class Guards:
    """Runtime checks of the structural invariants; counts passes per guard name."""

    def __init__(self, level: str = "oracle", oracle_bound: int = 12):
        self.level = level
        self.oracle_bound = oracle_bound
        self.passes: dict[str, int] = {}

    @property
    def enabled(self) -> bool:
        return self.level != "off"

    def exhaustive(self, g: Graph) -> bool:
        if self.level == "off":
            return False
        bound = BRUTE_FORCE_BOUND if self.level == "always" else self.oracle_bound
        return g.n <= bound

    def check(self, name: str, ok: bool, message: str = "") -> None:
        if not ok:
            raise GuardViolation(f"{name}: {message}")
        self.passes[name] = self.passes.get(name, 0) + 1

    def summary(self) -> dict[str, str]:
        return {name: f"pass ({n})" for name, n in sorted(self.passes.items())}


@dataclass
class AugmentationState:
    graph: Graph
    terminals: tuple[int, ...]
    purchased: set[Edge]
    level: int
    inner_index: int = 0
    smallest_deficient_terminals: int | None = None

    def subgraph(self) -> Graph:
        return self.graph.subgraph(self.purchased)


@dataclass
class MicroStep:
    index: int
    uncovered: int
    chosen: list[int]


@dataclass
class CoveringTrace:
    level: int
    inner_index: int
    mode: str
    num_cores: int
    micro: list[MicroStep] = field(default_factory=list)
    roots: list[int] = field(default_factory=list)
    call_costs: list = field(default_factory=list)
    smallest_deficient_terminals: int | None = None
    # purchased edges (in the working graph) when the inner iteration started
    start_edges: frozenset = field(default=frozenset(), repr=False)

    @property
    def h1(self) -> int:
        return self.micro[0].uncovered if self.micro else 0

    def to_dict(self) -> dict:
        return {
            "level": self.level,
            "inner": self.inner_index,
            "mode": self.mode,
            "cores": self.num_cores,
            "phi": self.smallest_deficient_terminals,
            "micro": [[m.index, m.uncovered, list(m.chosen)] for m in self.micro],
            "roots": list(self.roots),
            "call_costs": [_num(c) for c in self.call_costs],
        }


@dataclass
class SolveReport:
    solution: frozenset[Edge]
    total_cost: object
    dispatch_case: str
    traces: list[CoveringTrace]
    verification: Certificate
    level_costs: list = field(default_factory=list)
    inner_iterations: list[int] = field(default_factory=list)
    preprocess_costs: list = field(default_factory=list)
    guards: dict[str, str] = field(default_factory=dict)
    strategy: str = "per-terminal"
    seed: int | None = None
    # instance after terminal-edge subdivision; traces refer to its vertex ids
    work_instance: Instance | None = field(default=None, repr=False)

    def to_dict(self) -> dict:
        return {
            "dispatch_case": self.dispatch_case,
            "strategy": self.strategy,
            "seed": self.seed,
            "total_cost": _num(self.total_cost),
            "solution": [list(e) for e in sorted(self.solution)],
            "level_costs": [_num(c) for c in self.level_costs],
            "preprocess_costs": [_num(c) for c in self.preprocess_costs],
            "inner_iterations": list(self.inner_iterations),
            "traces": [t.to_dict() for t in self.traces],
            "guards": dict(self.guards),
            "verification": self.verification.to_dict(),
        }


def _num(c):
    if isinstance(c, int):
        return c
    return str(c)


# ---------------------------------------------------------------------------
# Terminal-edge subdivision
# ---------------------------------------------------------------------------


def subdivide_terminal_edges(inst: Instance) -> tuple[Instance, Callable[[Iterable[Edge]], frozenset[Edge]]]:
    """Replace each terminal--terminal edge by a path through a new vertex.

    The two halves split the original cost. Returns the new instance and a
    function mapping solution edges back to the original graph (an original
    edge is kept when both of its halves are present).
    """
    g = inst.graph
    tset = set(inst.terminals)
    split = [(u, v, c) for u, v, c in g.edges if u in tset and v in tset]
    if not split:
        return inst, lambda edges: frozenset(edge_key(*e) for e in edges)
    edges = [(u, v, c) for u, v, c in g.edges if not (u in tset and v in tset)]
    halves: dict[Edge, tuple[Edge, Edge]] = {}
    purchased = set(inst.purchased)
    for i, (u, v, c) in enumerate(split):
        mid = g.n + i
        c1 = c - c // 2 if isinstance(c, int) else c / 2
        edges += [(u, mid, c1), (v, mid, c - c1)]
        halves[(u, v)] = ((u, mid), (v, mid))
        if (u, v) in purchased:
            purchased.discard((u, v))
            purchased |= {(u, mid), (v, mid)}
    big = Graph(g.n + len(split), edges)
    half_of = {h: orig for orig, pair in halves.items() for h in pair}

    def back(sol: Iterable[Edge]) -> frozenset[Edge]:
        sol = {edge_key(*e) for e in sol}
        out = {e for e in sol if e not in half_of}
        for orig, (a, b) in halves.items():
            if a in sol and b in sol:
                out.add(orig)
        return frozenset(out)

    return Instance(big, inst.terminals, inst.k, frozenset(purchased)), back


# ---------------------------------------------------------------------------
# Algorithms
# ---------------------------------------------------------------------------


def trivial_pairwise(inst: Instance) -> frozenset[Edge]:
    """Union of min-cost ``k`` openly disjoint paths over all terminal pairs.

    Pairs are processed in ascending order and edges bought for earlier
    pairs are free for later ones. Returns the new edges (purchased edges
    excluded).
    """
    g = inst.graph
    have = set(inst.purchased)
    for s, t in iter_pairs(inst.terminals):
        have |= min_cost_disjoint_paths(g, s, t, inst.k, free_edges=have)
    return frozenset(have - inst.purchased)


def _lowest_terminal(rec: CoreRecord, tmask: int) -> int:
    m = rec.core_mask & tmask
    return (m & -m).bit_length() - 1


def covering_procedure(
    state: AugmentationState,
    records: list[CoreRecord],
    mode: str,
    strategy: str = "per-terminal",
    guards: Guards | None = None,
) -> tuple[frozenset[Edge], CoveringTrace]:
    """Cover every computed halo-family via rooted augmentation from a hitting set.

    ``mode`` is ``"moderate"`` (micro iterations until all families are
    hit), ``"large"`` (one round: the minimum-thickness terminal plus one
    core terminal per family it misses) or ``"below2k"`` (micro iterations,
    no halving assertion).
    """
    if not records:
        raise InputError("covering procedure needs at least one core")
    guards = guards or Guards("off")
    ts = state.terminals
    tmask = mask_of(ts)
    level = state.level
    trace = CoveringTrace(level, state.inner_index, mode, len(records))
    trace.smallest_deficient_terminals = state.smallest_deficient_terminals
    chosen_set: list[int] = []
    unhit = list(records)
    membership_cap = halo_membership_bound(len(ts), level)
    i = 0
    while unhit:
        i += 1
        h = len(unhit)
        table = thickness_table(unhit, ts)
        r_hat = table.min_terminal
        if guards.enabled:
            guards.check(
                "min-thickness-bound",
                table.min_thickness * len(ts) <= level * h,
                f"min thickness {table.min_thickness} exceeds {level}*{h}/{len(ts)}",
            )
        picks = [r_hat]
        for rec in unhit:
            if hits([r_hat], rec):
                continue
            if mode == "large" or rec.halo_mask >> r_hat & 1:
                picks.append(_lowest_terminal(rec, tmask))
        for p in picks:
            if p not in chosen_set:
                chosen_set.append(p)
        trace.micro.append(MicroStep(i, h, picks))
        unhit = [rec for rec in unhit if not hits(chosen_set, rec)]
        if guards.enabled and mode != "large":
            guards.check(
                "hit-set-picks",
                len(picks) <= 1 + membership_cap + 1e-9,
                f"{len(picks)} terminals picked in one micro iteration",
            )
            guards.check(
                "thickness-decay",
                len(unhit) * len(ts) <= level * h,
                f"{len(unhit)} families left from {h}",
            )
        if mode == "large":
            if unhit:
                raise GuardViolation("single hitting round left families unhit")
            break
    if guards.enabled:
        _check_micro_laws(trace, len(ts), level, guards)
    trace.roots = list(chosen_set)
    bought: set[Edge] = set()
    for r in chosen_set:
        req = RootedAugmentRequest.make(state.graph, state.purchased | bought, r, ts, level + 1)
        res = augment_rooted(req, strategy)
        trace.call_costs.append(res.cost)
        bought |= res.new_edges
    return frozenset(bought), trace


def _check_micro_laws(trace: CoveringTrace, num_terminals: int, level: int, guards: Guards) -> None:
    h1 = trace.h1
    if trace.mode == "large":
        guards.check("large-single-round", len(trace.micro) == 1, f"{len(trace.micro)} rounds")
        return
    if trace.mode == "moderate" and num_terminals >= 2 * level:
        for step in trace.micro:
            guards.check(
                "micro-halving",
                step.uncovered * 2 ** (step.index - 1) <= h1,
                f"h_{step.index}={step.uncovered} with h_1={h1}",
            )
        limit = math.ceil(math.log2(h1)) + 1 if h1 > 0 else 0
        guards.check("micro-count", len(trace.micro) <= limit, f"{len(trace.micro)} micro iterations, h_1={h1}")


def preprocess_reduce_cores(
    state: AugmentationState, strategy: str = "per-terminal", guards: Guards | None = None
) -> frozenset[Edge]:
    """Root padding onto the first ``l + 1`` terminals with ``rho = l + 1``.

    Afterwards every deficient set contains one of those terminals, so the
    number of cores is at most ``(l + 1) * 2(|T|-1)/(|T|-l)``.
    """
    guards = guards or Guards("off")
    level = state.level
    ts = state.terminals
    if len(ts) < 2 * level:
        raise InputError("core reduction needs |T| >= 2l")
    r_set = ts[: level + 1]
    check = guards.exhaustive(state.graph)
    res = root_pad(state.graph, state.purchased, r_set, level + 1, ts, strategy, check=check)
    if check:
        guards.check("root-padding", True)
    return res.new_edges


def _oracle_inner_checks(
    sub: Graph, state: AugmentationState, records: list[CoreRecord], guards: Guards
) -> BruteForceStructure:
    ts, level = state.terminals, state.level
    brute = BruteForceStructure(sub, ts, level)
    guards.check(
        "halo-oracle-agreement",
        brute.records() == records,
        "flow-based cores or halo-sets differ from enumeration",
    )
    phi = smallest_deficient_size(sub, ts, level + 1)
    guards.check(
        "phi-growth",
        phi is not None and phi >= 2 ** (state.inner_index - 1),
        f"smallest deficient set has {phi} terminals at inner iteration {state.inner_index}",
    )
    tmask = mask_of(ts)
    cores = brute.core_masks
    for a in range(len(cores)):
        for b in range(a + 1, len(cores)):
            if cores[a] & cores[b] & tmask:
                both = cores[a] | cores[b]
                guards.check(
                    "two-core-exclusion",
                    not bool(np.any((brute.small & both) == both)),
                    "a small deficient set contains two cores sharing a terminal",
                )
    return brute


def _check_new_cores(sub: Graph, state: AugmentationState, old_cores: list[int], guards: Guards) -> None:
    """Every small deficient set left must contain two old cores disjoint on T."""
    ts, level = state.terminals, state.level
    tmask = mask_of(ts)
    brute = BruteForceStructure(sub, ts, level)
    for m in brute.small:
        m = int(m)
        inside = [c for c in old_cores if c & m == c]
        ok = any(inside[a] & inside[b] & tmask == 0 for a in range(len(inside)) for b in range(a + 1, len(inside)))
        guards.check("new-cores-split", ok, "a surviving small deficient set holds fewer than two disjoint old cores")


def iterative_solve(inst: Instance, config: SolverConfig = SolverConfig(), mode: str | None = None) -> SolveReport:
    """Raise subset connectivity level by level with cores, halo-sets and covering."""
    k, ts = inst.k, inst.terminals
    if mode is None:
        if len(ts) >= 2 * k:
            mode = "large" if len(ts) >= k * k else "moderate"
        else:
            mode = "below2k"
    if mode == "below2k" and len(ts) <= k:
        raise InputError("the iterative algorithm needs more than k terminals")
    work, back = subdivide_terminal_edges(inst)
    _require_feasible(work)
    guards = Guards(config.assert_level, config.oracle_bound)
    state = AugmentationState(work.graph, work.terminals, set(work.purchased), 0)
    traces: list[CoveringTrace] = []
    level_costs = []
    pre_costs = []
    inner_counts = []
    start = subset_connectivity(state.subgraph(), ts, k)
    for level in range(start, k):
        before = set(state.purchased)
        state.level = level
        state.inner_index = 0
        sub = state.subgraph()
        if subset_connectivity(sub, ts, level + 1) > level:
            level_costs.append(0)
            pre_costs.append(0)
            inner_counts.append(0)
            continue
        padded = False
        if mode != "below2k" and config.preprocess:
            pre = preprocess_reduce_cores(state, config.strategy, guards)
            pre_costs.append(work.graph.cost_of(pre))
            state.purchased |= pre
            padded = True
        else:
            pre_costs.append(0)
        while True:
            sub = state.subgraph()
            records = compute_core_records(sub, ts, level, check=guards.enabled)
            if guards.enabled and records:
                guards.check("halo-neighbor-bound", all(len(r.halo_neighbors) <= level for r in records))
                cap = halo_membership_bound(len(ts), level)
                counts = halo_membership_counts(records, ts)
                guards.check(
                    "halo-membership-bound",
                    max(counts.values()) <= cap + 1e-9,
                    f"a terminal lies in {max(counts.values())} halo-sets, bound {cap:.3f}",
                )
                if padded and state.inner_index == 0:
                    guards.check(
                        "padded-core-count",
                        len(records) <= (level + 1) * cap + 1e-9,
                        f"{len(records)} cores after padding",
                    )
            if not records:
                break
            state.inner_index += 1
            state.smallest_deficient_terminals = min(len(r.core & set(ts)) for r in records)
            if guards.enabled:
                guards.check(
                    "inner-count",
                    state.inner_index <= math.ceil(math.log2(len(ts))) + 1,
                    f"inner iteration {state.inner_index} with |T|={len(ts)}",
                )
                guards.check(
                    "phi-doubling",
                    state.smallest_deficient_terminals >= 2 ** (state.inner_index - 1),
                    f"phi={state.smallest_deficient_terminals} at inner iteration {state.inner_index}",
                )
            if guards.exhaustive(sub):
                _oracle_inner_checks(sub, state, records, guards)
            start = frozenset(state.purchased)
            new, trace = covering_procedure(state, records, mode, config.strategy, guards)
            trace.start_edges = start
            traces.append(trace)
            if not new:
                raise GuardViolation(f"inner iteration {state.inner_index} at level {level} bought nothing")
            state.purchased |= new
            if guards.exhaustive(sub):
                _check_new_cores(state.subgraph(), state, [r.core_mask for r in records], guards)
        inner_counts.append(state.inner_index)
        level_costs.append(work.graph.cost_of(state.purchased - before))
        if guards.enabled:
            guards.check(
                "level-increase",
                subset_connectivity(state.subgraph(), ts, level + 1) >= level + 1,
                f"level {level} did not increase",
            )
    added = back(state.purchased - work.purchased)
    report = _finish(inst, added, mode, traces, guards, config)
    report.level_costs = level_costs
    report.preprocess_costs = pre_costs
    report.inner_iterations = inner_counts
    report.work_instance = work
    return report


def _require_feasible(inst: Instance) -> None:
    val, pair = weakest_pair(inst.graph, inst.terminals, inst.k)
    if pair is not None and val < inst.k:
        raise InfeasibleError(
            f"terminals {pair[0]} and {pair[1]} have at most {val} openly disjoint paths, need {inst.k}",
            witness=pair,
            achieved=val,
        )


def _finish(inst: Instance, added: frozenset[Edge], case: str, traces, guards: Guards, config: SolverConfig) -> SolveReport:
    solution = frozenset(inst.purchased | added)
    cert = verify_solution(inst.graph, inst.terminals, inst.k, solution)
    if not cert.passed:
        raise GuardViolation(f"solution fails verification at pair {cert.witness}")
    return SolveReport(
        solution=solution,
        total_cost=inst.graph.cost_of(added - inst.purchased),
        dispatch_case=case,
        traces=list(traces),
        verification=cert,
        guards=guards.summary(),
        strategy=config.strategy,
        seed=config.seed,
    )


def _solve_trivial(inst: Instance, config: SolverConfig) -> SolveReport:
    work, back = subdivide_terminal_edges(inst)
    _require_feasible(work)
    added = back(trivial_pairwise(work))
    return _finish(inst, added, "trivial", [], Guards(config.assert_level, config.oracle_bound), config)


def solve(inst: Instance, config: SolverConfig = SolverConfig()) -> SolveReport:
    """Solve a subset k-connectivity instance, dispatching on ``|T|`` versus ``k``."""
    k, nt = inst.k, len(inst.terminals)
    _require_feasible(inst)
    if config.dispatch == "trivial":
        return _solve_trivial(inst, config)
    if nt >= 2 * k:
        return iterative_solve(inst, config)
    if config.dispatch == "auto" or nt <= k:
        return _solve_trivial(inst, config)
    if config.dispatch == "iterative":
        return iterative_solve(inst, config, mode="below2k")
    # cheapest: run both, keep the lower cost (ties go to the pairwise answer)
    a = _solve_trivial(inst, config)
    b = iterative_solve(inst, config, mode="below2k")
    return b if b.total_cost < a.total_cost else a


def compose_small_T_solver(
    inst: Instance,
    base_solver: Callable[[Instance], Iterable[Edge]] = trivial_pairwise,
    strategy: str = "per-terminal",
) -> SolveReport:
    """Solve on the first ``k`` terminals, then attach the rest by rooted augmentation.

    A hub joined at zero cost to those ``k`` terminals is given ``k``
    openly disjoint paths to every terminal; dropping the hub leaves a
    subset ``k``-connected graph.
    """
    k, ts = inst.k, inst.terminals
    if len(ts) < k:
        raise InputError("composition needs at least k terminals")
    work, back = subdivide_terminal_edges(inst)
    _require_feasible(work)
    g = work.graph
    r_set = ts[:k]
    if k >= 2:
        base = frozenset(base_solver(Instance(g, r_set, k, work.purchased)))
    else:
        base = frozenset()
    have = set(work.purchased) | base
    extra: frozenset[Edge] = frozenset()
    if len(ts) > k:
        big, hub, pad = padded_graph(g, r_set)
        req = RootedAugmentRequest.make(big, have | pad, hub, ts, k)
        res = augment_rooted(req, strategy)
        extra = frozenset(e for e in res.new_edges if hub not in e)
    added = back((base | extra) - work.purchased)
    config = SolverConfig(strategy=strategy)
    return _finish(inst, added, "compose", [], Guards("off"), config)
