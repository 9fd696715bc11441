"""Command-line surface: generators, solvers, oracles, and the benchmark
harness, all emitting machine-readable records.

Exit codes: 0 on success, 1 when a benchmark guarantee fails, 2 on usage
errors.  All randomness is seeded explicitly; reported costs are always
recomputed by the core evaluator, never trusted from solver internals.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

from . import _kernels, bounded_fptas, graph_search, monotone_lp, oracles, tree_search
from .core import (
    DecisionTree,
    GraphSearchError,
    SearchInstance,
    average_cost,
    generate,
    parse_instance,
    serialize_decision_tree,
    serialize_instance,
    validate_decision_tree,
    validate_instance,
    worst_cost,
)

ALGORITHMS = (
    "tree4eps",
    "graphrec",
    "lp2avg",
    "lp2worst",
    "starfptas",
    "kfptas",
    "oracle-avg",
    "oracle-worst",
    "oracle-path",
)


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _load_instance(path: str) -> SearchInstance:
    inst = parse_instance(Path(path).read_text())
    problems = validate_instance(inst)
    if problems:
        raise GraphSearchError(f"instance {path} is invalid: {problems[0]}")
    return inst


def _write_or_print(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# gen
# ---------------------------------------------------------------------------


def cmd_gen(args: argparse.Namespace) -> int:
    params: dict = {
        "n": args.n,
        "wmin": args.wmin,
        "wmax": args.wmax,
        "cmin": args.cmin,
        "cmax": args.cmax,
        "cost": args.cost_model,
    }
    if args.extra_edges is not None:
        params["extra_edges"] = args.extra_edges
    if args.legs is not None:
        params["legs"] = args.legs
    if args.matrix:
        params["matrix"] = json.loads(Path(args.matrix).read_text())
    inst = generate(args.kind, params, args.seed)
    _write_or_print(serialize_instance(inst), args.out)
    return 0


# ---------------------------------------------------------------------------
# solve
# ---------------------------------------------------------------------------


def run_algorithm(
    inst: SearchInstance, algo: str, epsilon: Fraction, cut: str, k_limit: int,
    dump_lp: str | None = None,
) -> tuple[DecisionTree | None, dict]:
    """Run one solver; returns (tree, extra record fields)."""
    extra: dict = {}
    if algo == "tree4eps":
        return tree_search.tree_search_4eps(inst, epsilon), extra
    if algo == "graphrec":
        return graph_search.graph_search_recursive(inst, cut), extra
    if algo in ("lp2avg", "lp2worst"):
        res = monotone_lp.lp_pipeline(inst, "avg" if algo == "lp2avg" else "worst")
        if dump_lp:
            Path(dump_lp).write_text(res.program.to_lp_text())
        extra["lp_objective"] = float(res.lp_objective)
        return res.tree, extra
    if algo == "starfptas":
        return bounded_fptas.star_fptas(inst, epsilon), extra
    if algo == "kfptas":
        return bounded_fptas.k_fptas(inst, epsilon, k_limit=k_limit), extra
    if algo == "oracle-avg":
        cost, tree = oracles.opt_average_subset_dp(inst)
        extra["oracle_cost"] = cost
        return tree, extra
    if algo == "oracle-worst":
        cost, tree = oracles.opt_worst_bruteforce(inst)
        extra["oracle_cost"] = cost
        return tree, extra
    if algo == "oracle-path":
        extra["oracle_cost"] = oracles.opt_path_arbitrary(inst)
        return None, extra
    raise GraphSearchError(f"unknown algorithm {algo!r}")


def guarantee_bound(algo: str, epsilon: Fraction) -> float | None:
    """Approximation factor the algorithm promises against the exact optimum."""
    if algo == "tree4eps":
        return float(4 + epsilon)
    if algo == "graphrec":
        return 12 + 4 * math.sqrt(5)
    if algo in ("lp2avg", "lp2worst"):
        return 2.0
    if algo in ("starfptas", "kfptas"):
        return float(1 + epsilon)
    if algo.startswith("oracle"):
        return 1.0
    return None


def cmd_solve(args: argparse.Namespace) -> int:
    inst = _load_instance(args.instance)
    started = time.perf_counter()
    tree, extra = run_algorithm(
        inst, args.algo, args.epsilon, args.cut, args.k_limit, args.dump_lp
    )
    runtime_ms = (time.perf_counter() - started) * 1000.0
    record: dict = {"algo": args.algo, "runtime_ms": round(runtime_ms, 3)}
    record["params"] = {
        "epsilon": str(args.epsilon),
        "cut": args.cut,
        "k_limit": args.k_limit,
    }
    if tree is not None:
        problems = validate_decision_tree(inst, tree)
        if problems:
            raise GraphSearchError(f"solver produced an invalid tree: {problems[0]}")
        record["average_cost"] = average_cost(inst, tree)
        record["worst_cost"] = worst_cost(inst, tree)
        if args.out:
            Path(args.out).write_text(serialize_decision_tree(tree))
    else:
        record["average_cost"] = extra.get("oracle_cost")
        record["worst_cost"] = None
    record.update(extra)
    if args.oracle_check and tree is not None and inst.n <= 15:
        opt, _ = oracles.opt_average_subset_dp(inst)
        record["oracle_cost"] = opt
        if opt > 0:
            record["ratio"] = record["average_cost"] / opt
            bound = guarantee_bound(args.algo, args.epsilon)
            if bound is not None:
                record["bound"] = bound
    print(json.dumps(record, sort_keys=True))
    return 0


# ---------------------------------------------------------------------------
# separator
# ---------------------------------------------------------------------------


def cmd_separator(args: argparse.Namespace) -> int:
    from . import separator as sep_mod

    inst = _load_instance(args.instance)
    costs = inst.vertex_costs()
    if args.exact or args.delta is None:
        cost, sep = sep_mod.separator_dp(inst.graph, costs, inst.weights, args.alpha)
    else:
        sep = sep_mod.separator_fptas(
            inst.graph, costs, inst.weights, args.alpha, args.delta
        )
        cost = sum(costs[v] for v in sep)
    comps = inst.graph.components(frozenset(range(inst.n)) - sep)
    record = {
        "cost": cost,
        "separator": sorted(sep),
        "component_weights": [inst.weight_of(c) for c in comps],
        "alpha": str(args.alpha),
        "delta": str(args.delta) if args.delta is not None else None,
    }
    print(json.dumps(record, sort_keys=True))
    return 0


# ---------------------------------------------------------------------------
# oracle
# ---------------------------------------------------------------------------


def cmd_oracle(args: argparse.Namespace) -> int:
    if args.op == "linear-ordering":
        if not args.matrix:
            raise GraphSearchError("--op linear-ordering requires --matrix")
        matrix = json.loads(Path(args.matrix).read_text())
        cost, perm = oracles.opt_star_linear_ordering(matrix)
        print(json.dumps({"op": "linear-ordering", "cost": cost,
                          "permutation": list(perm)}, sort_keys=True))
        return 0
    if args.instance is None:
        raise GraphSearchError(f"--op {args.op} requires an instance file")
    inst = _load_instance(args.instance)
    if args.op == "avg":
        cost, tree = oracles.opt_average_subset_dp(inst)
        record = {"op": "avg", "cost": cost}
        if args.out:
            Path(args.out).write_text(serialize_decision_tree(tree))
    elif args.op == "worst":
        cost, tree = oracles.opt_worst_bruteforce(inst)
        record = {"op": "worst", "cost": cost}
        if args.out:
            Path(args.out).write_text(serialize_decision_tree(tree))
    elif args.op == "path":
        record = {"op": "path", "cost": oracles.opt_path_arbitrary(inst)}
    elif args.op == "alpha-sep":
        cost, sep = oracles.exact_alpha_separator(inst, args.alpha)
        record = {"op": "alpha-sep", "cost": cost, "separator": sorted(sep)}
    elif args.op == "min-ratio-cut":
        a, s, b, ratio = oracles.exact_min_ratio_cut(inst)
        record = {
            "op": "min-ratio-cut",
            "a": sorted(a),
            "s": sorted(s),
            "b": sorted(b),
            "ratio": str(ratio),
        }
    else:
        raise GraphSearchError(f"unknown oracle op {args.op!r}")
    print(json.dumps(record, sort_keys=True))
    return 0


# ---------------------------------------------------------------------------
# bench
# ---------------------------------------------------------------------------


def _bench_row(row: dict) -> dict:
    """Executed in a worker; must stay importable at module level."""
    inst = generate(row["kind"], row.get("params", {}), row["seed"])
    epsilon = Fraction(row.get("epsilon", "1"))
    algo = row["algo"]
    started = time.perf_counter()
    tree, extra = run_algorithm(
        inst, algo, epsilon, row.get("cut", "exact"), int(row.get("k_limit", 3))
    )
    runtime_ms = (time.perf_counter() - started) * 1000.0
    out = {
        "row_id": row["row_id"],
        "instance": f"{row['kind']}/n{inst.n}/seed{row['seed']}",
        "algo": algo,
        "n": inst.n,
        "runtime_ms": round(runtime_ms, 3),
        "oracle_cost": None,
        "ratio": None,
        "bound": guarantee_bound(algo, epsilon),
        "ok": True,
        "note": "",
    }
    if tree is None:
        out["cost"] = extra.get("oracle_cost")
        return out
    problems = validate_decision_tree(inst, tree)
    if problems:
        out["ok"] = False
        out["note"] = f"invalid tree: {problems[0]}"
        out["cost"] = None
        return out
    cost = average_cost(inst, tree)
    out["cost"] = cost
    if inst.n <= int(row.get("oracle_limit", 12)):
        opt, _ = oracles.opt_average_subset_dp(inst)
        out["oracle_cost"] = opt
        if opt > 0:
            out["ratio"] = cost / opt
            if out["bound"] is not None and cost > out["bound"] * opt + 1e-9:
                out["ok"] = False
                out["note"] = "guarantee violated"
        elif cost != 0:
            # Zero-weight optimum: any valid tree costs 0 on the average.
            out["ok"] = False
            out["note"] = "nonzero cost on zero-weight instance"
    return out


def _expand_suite(spec: dict) -> list[dict]:
    rows = []
    for entry in spec.get("rows", []):
        seeds = entry.get("seeds", [0])
        for seed in seeds:
            rows.append(
                {
                    "row_id": len(rows),
                    "kind": entry["kind"],
                    "params": entry.get("params", {}),
                    "seed": seed,
                    "algo": entry["algo"],
                    "epsilon": entry.get("epsilon", "1"),
                    "cut": entry.get("cut", "exact"),
                    "k_limit": entry.get("k_limit", 3),
                    "oracle_limit": entry.get("oracle_limit", 12),
                }
            )
    return rows


def cmd_bench(args: argparse.Namespace) -> int:
    spec = json.loads(Path(args.suite).read_text())
    rows = _expand_suite(spec)
    if args.jobs > 1 and rows:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_bench_row, rows))
    else:
        results = [_bench_row(row) for row in rows]
    results.sort(key=lambda r: r["row_id"])
    failures = [r for r in results if not r["ok"]]
    fields = [
        "row_id", "instance", "algo", "n", "cost", "oracle_cost", "ratio",
        "bound", "ok", "runtime_ms", "note",
    ]
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=fields)
        writer.writeheader()
        for r in results:
            writer.writerow({k: r.get(k) for k in fields})
        payload = buf.getvalue()
    else:
        payload = json.dumps(
            {"rows": results, "failures": len(failures)}, sort_keys=True, indent=2
        ) + "\n"
    _write_or_print(payload, args.out)
    for r in results:
        ratio = f"{r['ratio']:.3f}" if r["ratio"] is not None else "-"
        line = (
            f"row {r['row_id']:4d} {r['algo']:>10} n={r['n']:<3} "
            f"cost={r['cost']} oracle={r['oracle_cost']} ratio={ratio} "
            f"{'ok' if r['ok'] else 'FAIL ' + r['note']}"
        )
        print(line, file=sys.stderr)
    print(
        f"{len(results)} rows, {len(failures)} failures", file=sys.stderr
    )
    return 1 if failures else 0


# ---------------------------------------------------------------------------
# kernels
# ---------------------------------------------------------------------------


def cmd_kernels(args: argparse.Namespace) -> int:
    backends = _kernels.available_backends()
    print(f"active backend: {_kernels.BACKEND}")
    print(f"available: {', '.join(sorted(backends))}")
    if not args.bench:
        return 0
    inst = generate(
        "random_tree", {"n": args.n, "wmin": 1, "wmax": 10, "cmin": 1, "cmax": 10}, 7
    )
    adj = inst.graph.neighbor_masks()
    wc = [
        [inst.weights[x] * inst.query_cost(v, x) for x in range(inst.n)]
        for v in range(inst.n)
    ]
    from .separator import _rooted_orders

    order, children = _rooted_orders(inst.graph)
    cases = {
        "subset_dp_average": lambda mod: mod.subset_dp_average(adj, wc),
        "alpha_separator": lambda mod: mod.alpha_separator(
            adj, list(inst.vertex_costs()), list(inst.weights), inst.total_weight // 2
        ),
        "min_ratio_cut": lambda mod: mod.min_ratio_cut(
            adj, list(inst.vertex_costs()), list(inst.weights)
        ),
        "separator_dp": lambda mod: mod.separator_dp(
            order, children, list(inst.vertex_costs()), list(inst.weights),
            10 * inst.n,
        ),
    }
    print(f"benchmark on random_tree n={args.n}, {args.repeat} repeats")
    timings: dict[str, dict[str, float]] = {}
    for case, fn in cases.items():
        timings[case] = {}
        baseline = None
        for name, mod in sorted(backends.items()):
            best = math.inf
            for _ in range(args.repeat):
                t0 = time.perf_counter()
                fn(mod)
                best = min(best, time.perf_counter() - t0)
            timings[case][name] = best
        py = timings[case].get("python")
        cy = timings[case].get("cython")
        speedup = f"  speedup {py / cy:6.1f}x" if py and cy else ""
        parts = "  ".join(f"{n}={t * 1000:9.3f}ms" for n, t in sorted(timings[case].items()))
        print(f"  {case:20} {parts}{speedup}")
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="graphsearch",
        description="Search-strategy synthesis for hidden-target location in graphs",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate an instance file")
    p.add_argument("--kind", required=True, choices=(
        "path", "star", "spider", "random_tree", "random_connected_graph",
        "linear_ordering_star",
    ))
    p.add_argument("--n", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--wmin", type=int, default=0)
    p.add_argument("--wmax", type=int, default=10)
    p.add_argument("--cmin", type=int, default=0)
    p.add_argument("--cmax", type=int, default=10)
    p.add_argument("--cost-model", default="vertex", choices=("vertex", "pairwise", "monotone"))
    p.add_argument("--extra-edges", type=int, default=None)
    p.add_argument("--legs", type=int, default=None)
    p.add_argument("--matrix", help="JSON file with the ordering-cost matrix")
    p.add_argument("--out", help="output path (stdout when omitted)")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("solve", help="run a solver on an instance file")
    p.add_argument("instance")
    p.add_argument("--algo", required=True, choices=ALGORITHMS)
    p.add_argument("--epsilon", type=_fraction, default=Fraction(1))
    p.add_argument("--cut", default="exact", choices=("exact", "greedy"))
    p.add_argument("--k-limit", type=int, default=3)
    p.add_argument("--out", help="decision-tree output path")
    p.add_argument("--dump-lp", help="write the LP program in LP text format")
    p.add_argument("--oracle-check", action="store_true",
                   help="also report the exact optimum and the ratio (n <= 15)")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("separator", help="weighted alpha-separator on a tree instance")
    p.add_argument("instance")
    p.add_argument("--alpha", type=_fraction, required=True)
    p.add_argument("--delta", type=_fraction, default=None,
                   help="bicriteria slack; omit for the exact DP")
    p.add_argument("--exact", action="store_true", help="force the exact DP")
    p.set_defaults(func=cmd_separator)

    p = sub.add_parser("oracle", help="exact desk-scale solvers")
    p.add_argument("instance", nargs="?", default=None,
                   help="instance file (not needed for linear-ordering)")
    p.add_argument("--op", required=True,
                   choices=("avg", "worst", "path", "alpha-sep", "min-ratio-cut",
                            "linear-ordering"))
    p.add_argument("--alpha", type=_fraction, default=Fraction(2))
    p.add_argument("--matrix", help="JSON ordering-cost matrix (linear-ordering)")
    p.add_argument("--out", help="decision-tree output path")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("bench", help="run a benchmark suite specification")
    p.add_argument("suite", help="JSON suite file: rows of kind/params/seeds/algo")
    p.add_argument("--format", default="csv", choices=("csv", "json"))
    p.add_argument("--out", help="report output path (stdout when omitted)")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("kernels", help="show or benchmark the kernel backends")
    p.add_argument("--bench", action="store_true")
    p.add_argument("--n", type=int, default=13)
    p.add_argument("--repeat", type=int, default=3)
    p.set_defaults(func=cmd_kernels)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except GraphSearchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
