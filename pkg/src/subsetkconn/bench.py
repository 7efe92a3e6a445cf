"""Ratio experiments against the exact optimum on tiny instances.

Each instance yields one JSON record with the optimum, the cost of the
pairwise algorithm, the cost of the iterative algorithm (when it applies)
and their ratios. ``summarize`` groups records by ``(k, regime)`` and
reports median ratios.
"""

from __future__ import annotations

import json
import math
import random
import statistics
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Iterable, Iterator

from .generate import GenSpec, generate
from .oracle import brute_force_subset_optimum
from .solver import Instance, SolverConfig, iterative_solve, trivial_pairwise


@dataclass(frozen=True)
class BenchConfig:
    count: int = 60
    seed: int = 0
    max_k: int = 3
    max_edges: int = 20
    min_n: int = 5
    max_n: int = 9
    assert_level: str = "oracle"


def regime(num_terminals: int, k: int) -> str:
    if num_terminals < 2 * k:
        return "below2k"
    return "large" if num_terminals >= k * k else "moderate"


def _ratio(cost, opt):
    if opt == 0:
        return 1.0 if cost == 0 else None
    return float(Fraction(cost) / Fraction(opt))


def _skeleton_edges(model: str, n: int, t: int, k: int) -> int:
    """Edges the generator must keep for feasibility; ``max_edges`` cannot drop them."""
    if model == "power-of-k-core":
        return n * math.ceil(k / 2)
    hubs = k * t
    return hubs + (n - k - 1 if model == "padded-tree" else 0)


def tiny_specs(cfg: BenchConfig) -> Iterator[GenSpec]:
    rng = random.Random(cfg.seed)
    models = ("random-geometric", "power-of-k-core", "padded-tree")
    for i in range(cfg.count):
        model = models[i % len(models)]
        while True:
            k = rng.randint(1, cfg.max_k)
            lo = max(cfg.min_n, k + 2 if model != "power-of-k-core" else 2 * ((k + 1) // 2) + 1)
            n = rng.randint(lo, max(lo, cfg.max_n))
            room = n - k if model != "power-of-k-core" else n
            fits = [t for t in range(2, room + 1) if _skeleton_edges(model, n, t, k) <= cfg.max_edges]
            if fits:
                break
        t = rng.choice(fits)
        yield GenSpec(
            model=model,
            n=n,
            num_terminals=t,
            k=k,
            seed=rng.randrange(2**31),
            max_edges=cfg.max_edges,
            radius=0.5,
            extra_edge_prob=0.3,
        )


def run_instance(inst: Instance, assert_level: str = "oracle") -> dict:
    """Costs of both algorithms and the exact optimum for one instance."""
    opt = brute_force_subset_optimum(inst.graph, inst.terminals, inst.k, inst.purchased)
    opt_cost = opt[0]
    trivial = inst.graph.cost_of(trivial_pairwise(inst))
    nt, k = len(inst.terminals), inst.k
    iterative = None
    if nt > k:
        mode = None if nt >= 2 * k else "below2k"
        rep = iterative_solve(inst, SolverConfig(assert_level=assert_level), mode=mode)
        iterative = rep.total_cost
    return {
        "n": inst.graph.n,
        "m": inst.graph.num_edges,
        "k": k,
        "t": nt,
        "regime": regime(nt, k),
        "opt": opt_cost,
        "trivial": trivial,
        "iterative": iterative,
        "trivial_ratio": _ratio(trivial, opt_cost),
        "iterative_ratio": None if iterative is None else _ratio(iterative, opt_cost),
        "pairwise_bound_ok": trivial <= nt * nt * opt_cost,
    }


def run_bench(cfg: BenchConfig) -> list[dict]:
    records = []
    for i, spec in enumerate(tiny_specs(cfg)):
        f = generate(spec)
        rec = {"id": i, "model": spec.model, "seed": spec.seed}
        rec.update(run_instance(f.to_instance(), cfg.assert_level))
        records.append(rec)
    return records


def dump_records(records: Iterable[dict]) -> str:
    return "".join(json.dumps(r, sort_keys=True) + "\n" for r in records)


@dataclass(frozen=True)
class SummaryRow:
    k: int
    regime: str
    count: int
    median_trivial_ratio: float | None
    median_iterative_ratio: float | None
    max_trivial_ratio: float | None
    max_iterative_ratio: float | None


def _median(xs):
    xs = [x for x in xs if x is not None]
    return statistics.median(xs) if xs else None


def _max(xs):
    xs = [x for x in xs if x is not None]
    return max(xs) if xs else None


def summarize(records: Iterable[dict]) -> list[SummaryRow]:
    groups: dict[tuple[int, str], list[dict]] = {}
    for r in records:
        groups.setdefault((r["k"], r["regime"]), []).append(r)
    rows = []
    for (k, reg), rs in sorted(groups.items()):
        tr = [r["trivial_ratio"] for r in rs]
        it = [r["iterative_ratio"] for r in rs]
        rows.append(SummaryRow(k, reg, len(rs), _median(tr), _median(it), _max(tr), _max(it)))
    return rows


def format_table(rows: list[SummaryRow]) -> str:
    def f(x):
        return "-" if x is None else f"{x:.3f}"

    head = f"{'k':>2} {'regime':<9} {'count':>5} {'med pairwise':>12} {'med iterative':>13} {'max pairwise':>12} {'max iterative':>13}"
    lines = [head]
    for r in rows:
        lines.append(
            f"{r.k:>2} {r.regime:<9} {r.count:>5} {f(r.median_trivial_ratio):>12} "
            f"{f(r.median_iterative_ratio):>13} {f(r.max_trivial_ratio):>12} {f(r.max_iterative_ratio):>13}"
        )
    return "\n".join(lines) + "\n"


def summary_records(rows: list[SummaryRow]) -> list[dict]:
    return [asdict(r) for r in rows]
