"""Cost/optimum ratios of both algorithms on tiny generated instances.

    python3 scripts/run_ratio_experiment.py --count 200 --seed 1 --records ratios.jsonl
"""

import argparse
import sys
import time
from dataclasses import dataclass

from subsetkconn.bench import BenchConfig, dump_records, format_table, run_bench, summarize


@dataclass(frozen=True)
class ExperimentConfig:
    count: int = 200
    seed: int = 1
    max_k: int = 3
    max_edges: int = 20
    records: str | None = None


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--count", type=int, default=ExperimentConfig.count)
    p.add_argument("--seed", type=int, default=ExperimentConfig.seed)
    p.add_argument("--max-k", type=int, default=ExperimentConfig.max_k)
    p.add_argument("--max-edges", type=int, default=ExperimentConfig.max_edges)
    p.add_argument("--records", default=None, help="write one JSON record per instance here")
    a = p.parse_args(argv)
    cfg = ExperimentConfig(a.count, a.seed, a.max_k, a.max_edges, a.records)

    start = time.perf_counter()
    records = run_bench(BenchConfig(count=cfg.count, seed=cfg.seed, max_k=cfg.max_k, max_edges=cfg.max_edges))
    elapsed = time.perf_counter() - start
    if cfg.records:
        with open(cfg.records, "w", encoding="utf-8") as fh:
            fh.write(dump_records(records))
    sys.stdout.write(format_table(summarize(records)))
    bad = sum(not r["pairwise_bound_ok"] for r in records)
    sys.stdout.write(f"{len(records)} instances in {elapsed:.1f} s, pairwise bound violations: {bad}\n")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
