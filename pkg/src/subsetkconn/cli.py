"""Command-line interface: ``subsetkconn {solve,verify,gen,oracle,reduce,bench}``.

Exit codes: 0 success (solution verified), 1 infeasible or failed
verification, 2 unreadable input or refused request.
"""

from __future__ import annotations

import argparse
import json
import sys

from .bench import BenchConfig, dump_records, format_table, run_bench, summarize, summary_records
from .errors import InfeasibleError, InputError, SizeLimitError
from .generate import COST_MODELS, MODELS, GenSpec, generate
from .instance_io import InstanceFile, dumps_solution, load_instance, load_solution
from .oracle import brute_force_subset_optimum, verify_solution
from .reduction import rooted_to_subset
from .rooted import STRATEGIES
from .solver import ASSERT_LEVELS, DISPATCH_MODES, SolverConfig, solve

EXIT_OK, EXIT_INFEASIBLE, EXIT_INPUT = 0, 1, 2


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def cmd_solve(args) -> int:
    f = load_instance(args.instance)
    inst = f.to_instance()
    config = SolverConfig(
        dispatch=args.dispatch, strategy=args.strategy, assert_level=args.assert_level, seed=args.seed
    )
    try:
        rep = solve(inst, config)
    except InfeasibleError as exc:
        msg = {"status": "infeasible", "witness": list(exc.witness or ()), "achieved": exc.achieved}
        if args.format == "json":
            _emit(_json(msg), args.output)
        else:
            _emit(f"infeasible: {exc}\nwitness {' '.join(map(str, exc.witness or ()))}\n", args.output)
        return EXIT_INFEASIBLE
    if args.format == "json":
        d = rep.to_dict()
        d["status"] = "verified" if rep.verification.passed else "failed"
        _emit(_json(d), args.output)
    else:
        lines = [
            f"status {'verified' if rep.verification.passed else 'failed'}",
            f"dispatch {rep.dispatch_case}",
            f"strategy {rep.strategy}",
            f"cost {rep.total_cost}",
            f"edges {len(rep.solution)}",
            f"min_connectivity {rep.verification.min_connectivity}",
        ]
        for i, c in enumerate(rep.level_costs):
            lines.append(f"level {i} cost {c} inner {rep.inner_iterations[i]}")
        for t in rep.traces:
            micro = " ".join(f"h{m.index}={m.uncovered}" for m in t.micro)
            lines.append(f"trace level={t.level} inner={t.inner_index} cores={t.num_cores} roots={len(t.roots)} {micro}")
        for name, status in rep.guards.items():
            lines.append(f"guard {name} {status}")
        lines.append(dumps_solution(rep.solution).rstrip("\n"))
        _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK if rep.verification.passed else EXIT_INFEASIBLE


def cmd_verify(args) -> int:
    f = load_instance(args.instance)
    g = f.graph()
    sol = g.check_edges(load_solution(args.solution))
    cert = verify_solution(g, f.terminals, f.k, sol)
    if args.format == "json":
        _emit(_json(cert.to_dict()), args.output)
    else:
        lines = [f"{'pass' if cert.passed else 'fail'} k={cert.k} min={cert.min_connectivity}"]
        if cert.witness:
            lines.append(f"witness {cert.witness[0]} {cert.witness[1]}")
        lines += [f"pair {s} {t} {c}" for (s, t), c in sorted(cert.pairs.items())]
        _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK if cert.passed else EXIT_INFEASIBLE


def cmd_gen(args) -> int:
    spec = GenSpec(
        model=args.model,
        n=args.n,
        num_terminals=args.terminals,
        k=args.k,
        cost=args.cost,
        max_cost=args.max_cost,
        seed=args.seed if args.seed is not None else 0,
        max_edges=args.max_edges,
        layout=args.layout,
    )
    f = generate(spec)
    _emit(f.dumps_json() if args.format == "json" else f.dumps_text(), args.output)
    return EXIT_OK


def cmd_oracle(args) -> int:
    f = load_instance(args.instance)
    inst = f.to_instance()
    found = brute_force_subset_optimum(inst.graph, inst.terminals, inst.k, inst.purchased, args.bound, args.order)
    if found is None:
        sys.stdout.write("infeasible\n")
        return EXIT_INFEASIBLE
    cost, edges = found
    if args.format == "json":
        _emit(_json({"cost": cost, "solution": [list(e) for e in sorted(edges | inst.purchased)]}), args.output)
    else:
        _emit(f"cost {cost}\n" + dumps_solution(edges | inst.purchased), args.output)
    return EXIT_OK


def cmd_reduce(args) -> int:
    f = load_instance(args.instance)
    inst, rmap = rooted_to_subset(f.to_rooted())
    out = InstanceFile.from_parts(inst.graph, inst.terminals, inst.k, inst.purchased)
    if args.format == "json":
        d = out.to_dict()
        d["reduction"] = {
            "root": rmap.root,
            "clique": list(rmap.clique_vertices),
            "connectors": [[*c, *o] for c, o in sorted(rmap.edge_correspondence.items())],
        }
        _emit(json.dumps(d, sort_keys=True) + "\n", args.output)
    else:
        head = [f"# clique {' '.join(map(str, rmap.clique_vertices))}"]
        head += [f"# connector {c[0]} {c[1]} from {o[0]} {o[1]}" for c, o in sorted(rmap.edge_correspondence.items())]
        _emit("\n".join(head) + "\n" + out.dumps_text(), args.output)
    return EXIT_OK


def cmd_bench(args) -> int:
    cfg = BenchConfig(
        count=args.count,
        seed=args.seed if args.seed is not None else 0,
        max_k=args.max_k,
        assert_level=args.assert_level,
    )
    records = run_bench(cfg)
    rows = summarize(records)
    if args.records:
        with open(args.records, "w", encoding="utf-8") as fh:
            fh.write(dump_records(records))
    if args.format == "json":
        _emit(_json({"summary": summary_records(rows), "instances": len(records)}), args.output)
    else:
        _emit(format_table(rows), args.output)
    bad = [r["id"] for r in records if not r["pairwise_bound_ok"]]
    return EXIT_INFEASIBLE if bad else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="subsetkconn", description="Subset k-connected subgraph approximation")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, seed=True):
        sp.add_argument("--format", choices=("text", "json"), default="text")
        sp.add_argument("-o", "--output", help="write to this file instead of stdout")
        if seed:
            sp.add_argument("--seed", type=int, default=None)

    sp = sub.add_parser("solve", help="solve an instance file")
    sp.add_argument("instance")
    sp.add_argument("--strategy", choices=sorted(STRATEGIES), default="per-terminal")
    sp.add_argument("--assert-level", choices=ASSERT_LEVELS, default="oracle")
    sp.add_argument("--dispatch", choices=DISPATCH_MODES, default="auto")
    common(sp)
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("verify", help="check a solution file against an instance")
    sp.add_argument("instance")
    sp.add_argument("solution")
    common(sp, seed=False)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("gen", help="generate a random feasible instance")
    sp.add_argument("--model", choices=MODELS, default="random-geometric")
    sp.add_argument("--n", type=int, default=20)
    sp.add_argument("--terminals", type=int, default=6)
    sp.add_argument("--k", type=int, default=2)
    sp.add_argument("--cost", choices=COST_MODELS, default="uniform")
    sp.add_argument("--max-cost", type=int, default=10)
    sp.add_argument("--max-edges", type=int, default=None)
    sp.add_argument("--layout", choices=("random", "example-tree"), default="random")
    common(sp)
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("oracle", help="exact optimum by exhaustive search (small instances)")
    sp.add_argument("instance")
    sp.add_argument("--bound", type=int, default=22)
    sp.add_argument("--order", choices=("cost", "index"), default="cost")
    common(sp, seed=False)
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("reduce", help="turn a rooted instance into a subset instance")
    sp.add_argument("instance")
    common(sp, seed=False)
    sp.set_defaults(func=cmd_reduce)

    sp = sub.add_parser("bench", help="ratio experiment against the exact optimum")
    sp.add_argument("--count", type=int, default=60)
    sp.add_argument("--max-k", type=int, default=3)
    sp.add_argument("--records", help="write per-instance JSON lines here")
    sp.add_argument("--assert-level", choices=ASSERT_LEVELS, default="oracle")
    common(sp)
    sp.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, SizeLimitError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
