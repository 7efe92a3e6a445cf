"""Solve a batch of generated instances and report dispatch, cost and trace depth.

    python3 scripts/run_feasibility_batch.py --count 500 --max-n 40 --max-k 4
"""

import argparse
import collections
import json
import random
import sys
import time
from dataclasses import dataclass

from subsetkconn.errors import InputError
from subsetkconn.generate import COST_MODELS, MODELS, GenSpec, generate
from subsetkconn.solver import SolverConfig, solve


@dataclass(frozen=True)
class BatchConfig:
    count: int = 500
    seed: int = 0
    min_n: int = 8
    max_n: int = 40
    max_k: int = 4
    assert_level: str = "oracle"


def specs(cfg: BatchConfig):
    rng = random.Random(cfg.seed)
    made = 0
    while made < cfg.count:
        k = rng.randint(1, cfg.max_k)
        t = rng.randint(2, max(2, k * k + 4))
        try:
            spec = GenSpec(
                model=rng.choice(MODELS),
                n=rng.randint(cfg.min_n, cfg.max_n),
                num_terminals=t,
                k=k,
                cost=rng.choice(COST_MODELS),
                seed=rng.randrange(2**31),
            )
        except InputError:
            continue
        made += 1
        yield spec


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--count", type=int, default=BatchConfig.count)
    p.add_argument("--seed", type=int, default=BatchConfig.seed)
    p.add_argument("--max-n", type=int, default=BatchConfig.max_n)
    p.add_argument("--max-k", type=int, default=BatchConfig.max_k)
    p.add_argument("--assert-level", default=BatchConfig.assert_level, choices=("off", "oracle", "always"))
    p.add_argument("--jsonl", help="write one JSON line per run here")
    a = p.parse_args(argv)
    cfg = BatchConfig(count=a.count, seed=a.seed, max_n=a.max_n, max_k=a.max_k, assert_level=a.assert_level)

    out = open(a.jsonl, "w", encoding="utf-8") if a.jsonl else None
    cases = collections.Counter()
    failures = 0
    deepest = (0, 0)
    start = time.perf_counter()
    for spec in specs(cfg):
        inst = generate(spec).to_instance()
        rep = solve(inst, SolverConfig(seed=spec.seed, assert_level=cfg.assert_level))
        cases[rep.dispatch_case] += 1
        failures += not rep.verification.passed
        micro = max((len(t.micro) for t in rep.traces), default=0)
        inner = max(rep.inner_iterations, default=0)
        deepest = max(deepest, (inner, micro))
        if out:
            row = {"model": spec.model, "n": spec.n, "k": spec.k, "t": spec.num_terminals, "seed": spec.seed}
            row.update(case=rep.dispatch_case, cost=str(rep.total_cost), inner=rep.inner_iterations, verified=rep.verification.passed)
            out.write(json.dumps(row, sort_keys=True) + "\n")
    if out:
        out.close()
    elapsed = time.perf_counter() - start
    print(f"{sum(cases.values())} instances in {elapsed:.1f} s: {dict(sorted(cases.items()))}")
    print(f"failed verification: {failures}; deepest run: {deepest[0]} inner, {deepest[1]} micro iterations")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
