"""Command line: generate instances, run algorithms, verify results, benchmark.

Exit codes: 0 validated success, 1 validation failure, 2 precondition or
usage error, 3 internal contradiction.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import math
import sys
from fractions import Fraction
from pathlib import Path
from types import SimpleNamespace

import numpy as np

from . import oracle
from .bni import bni_deg_plus_one, edge_list_color
from .degplus1 import PreconditionError, arboricity_list_color, deg_plus_one_list_color
from .engine import CONGEST, LOCAL, CongestViolation, RoundLimitExceeded, Runner
from .graph import (
    GENERATOR_KINDS,
    Graph,
    GraphError,
    Orientation,
    build_graph,
    from_edge_list_text,
    generate,
    orient_by_degeneracy,
)
from .hpartition import HPartition, HPartitionStall, generalized_h_partition, h_partition_fixed_bound
from .listreduce import InternalError, ListAssignment, oriented_reduction, recursive_list_color
from .primitives import as_fraction, defects, linial_coloring, relative_defective_coloring

EXIT_OK, EXIT_INVALID, EXIT_PRECONDITION, EXIT_INTERNAL = 0, 1, 2, 3

ALGORITHMS = ("degplus1", "arboricity", "bni", "edgecolor", "reduce", "recursive", "hpartition", "linial", "defective")
LIST_KINDS = ("degplus1", "arboricity", "recursive", "full")


class UsageError(Exception):
    pass


# -- instance files --------------------------------------------------------------


def make_lists(g: Graph, kind: str, seed: int, epsilon=1, r: int = 2, a: int | None = None) -> tuple[list[list[int]], int]:
    """Random lists of the size the chosen algorithm needs, and the space size."""
    rng = np.random.Generator(np.random.PCG64(seed + 1))
    delta = max(g.max_degree(), 2)
    eps = as_fraction(epsilon)
    if kind == "degplus1":
        space = delta**3
        sizes = [g.degree(v) + 1 for v in range(g.n)]
    elif kind == "arboricity":
        a = a if a is not None else max(1, oracle.degeneracy(g))
        need = math.floor((2 + eps) * a) + 1
        space = max(delta**2, need)
        sizes = [need] * g.n
    elif kind == "recursive":
        o, _ = orient_by_degeneracy(g)
        gamma = (2 + eps) ** r
        sizes = [math.ceil(gamma * b) + 1 for b in o.out_degree]
        space = max(delta**3, max(sizes, default=1))
    elif kind == "full":
        space = delta**3
        sizes = [space] * g.n
    else:
        raise UsageError(f"unknown list kind {kind!r}")
    lists = [sorted(int(c) for c in rng.choice(space, size=s, replace=False)) for s in sizes]
    return lists, space


def instance_to_json(g: Graph, lists, space: int, meta: dict) -> dict:
    return {
        "graph": {"n": g.n, "edges": [list(e) for e in g.edges()]},
        "lists": lists,
        "space": space,
        "meta": meta,
    }


def load_instance(path: str) -> tuple[Graph, ListAssignment | None, dict]:
    try:
        obj = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read instance {path}: {exc}") from exc
    gobj = obj.get("graph")
    if isinstance(gobj, str):
        g = from_edge_list_text(gobj)
    elif isinstance(gobj, dict):
        g = build_graph(gobj["n"], gobj.get("edges", []))
    else:
        raise UsageError("instance has no graph")
    lists = None
    if obj.get("lists") is not None:
        lists = ListAssignment.of(obj["lists"], obj.get("space"))
        if len(lists.lists) != g.n:
            raise UsageError(f"instance has {len(lists.lists)} lists for {g.n} nodes")
    return g, lists, obj


# -- running ------------------------------------------------------------------------


def make_runner(args, g: Graph, space: int) -> Runner:
    mode = CONGEST if args.mode == "congest" else LOCAL
    if args.emulated and mode == CONGEST:
        raise UsageError("--emulated supports only --mode local")
    return Runner(
        mode=mode,
        budget_bits=args.budget_bits,
        emulated=args.emulated,
        max_rounds=args.max_rounds,
        space=space,
        network_size=g.n,
    )


def _need_lists(lists):
    if lists is None:
        raise UsageError("this algorithm needs lists in the instance")
    return lists


def execute(algorithm: str, g: Graph, lists: ListAssignment | None, obj: dict, args) -> dict:
    """Run one algorithm; returns the result dict including its validation verdict."""
    space = lists.size if lists is not None else 1
    runner = make_runner(args, g, space)
    eps = as_fraction(args.epsilon)
    result: dict = {"algorithm": algorithm, "params": {"epsilon": str(eps), "r": args.r, "eta": args.eta, "theta": args.theta}}
    verdicts = {}
    if algorithm == "linial":
        col = linial_coloring(g, runner)
        result["coloring"] = list(col.color)
        result["palette_size"] = col.palette_size
        verdicts["proper"] = oracle.verify_proper(g, col.color)
    elif algorithm == "defective":
        lam = as_fraction(args.lam)
        base = linial_coloring(g, runner)
        dc = relative_defective_coloring(g, lam, base, runner)
        result["buckets"] = list(dc.bucket)
        result["q"] = dc.q
        result["params"]["lambda"] = str(lam)
        verdicts["defect"] = _verify_defect(g, dc.bucket, lam)
    elif algorithm == "hpartition":
        if args.arboricity is not None:
            hp = h_partition_fixed_bound(g, args.arboricity, eps, runner)
            verdicts["hpartition"] = oracle.verify_h_partition(g, None, hp)
        else:
            o, _ = orient_by_degeneracy(g)
            hp = generalized_h_partition(g, o, eps, runner)
            verdicts["hpartition"] = oracle.verify_h_partition(g, o, hp)
        result["partition"] = hp.to_dict()
    elif algorithm == "reduce":
        lists = _need_lists(lists)
        o, _ = orient_by_degeneracy(g)
        out = oriented_reduction(g, o, lists, args.eta, eps, runner)
        result["reduction"] = out.to_dict()
        verdicts["reduction"] = oracle.verify_oriented_reduction(g, o, lists, out, min(args.eta, lists.size), 2 + eps)
    elif algorithm == "recursive":
        lists = _need_lists(lists)
        o, _ = orient_by_degeneracy(g)
        col = recursive_list_color(g, o, lists, eps, args.r, runner)
        result["coloring"] = col
        verdicts["proper"] = oracle.verify_proper(g, col)
        verdicts["lists"] = oracle.verify_list_respecting(lists, col)
        guaranteed = oracle.guaranteed_set(lists, o.out_degree, (2 + eps) ** args.r)
        verdicts["guaranteed"] = oracle.verify_total([col[v] for v in guaranteed])
    elif algorithm in ("degplus1", "bni", "arboricity"):
        lists = _need_lists(lists)
        if algorithm == "degplus1":
            col = deg_plus_one_list_color(g, lists, runner, max_space_exponent=args.max_space_exponent)
        elif algorithm == "bni":
            if g.max_degree() <= 16:
                theta = oracle.neighborhood_independence(g)
                if theta > args.theta:
                    print(
                        f"warning: declared theta={args.theta} is below the measured neighborhood independence {theta}",
                        file=sys.stderr,
                    )
                    result["warning"] = f"declared theta {args.theta} < measured {theta}"
            col = bni_deg_plus_one(g, args.theta, lists, runner, max_space_exponent=args.max_space_exponent)
        else:
            a = args.arboricity if args.arboricity is not None else max(1, oracle.degeneracy(g))
            result["params"]["a"] = a
            col = arboricity_list_color(g, a, eps, lists, runner)
        result["coloring"] = col
        verdicts["proper"] = oracle.verify_proper(g, col)
        verdicts["lists"] = oracle.verify_list_respecting(lists, col)
        verdicts["total"] = oracle.verify_total(col)
    elif algorithm == "edgecolor":
        edge_lists = obj.get("edge_lists")
        colors = edge_list_color(g, edge_lists, runner, max_space_exponent=args.max_space_exponent)
        result["edge_coloring"] = [[u, v, c] for (u, v), c in colors.items()]
        verdicts["edges"] = oracle.verify_edge_coloring(g, colors)
    else:
        raise UsageError(f"unknown algorithm {algorithm!r}")
    result["metrics"] = runner.metrics.to_dict()
    result["validation"] = {k: v.to_dict() for k, v in verdicts.items()}
    result["ok"] = all(v.ok for v in verdicts.values())
    return result


def _verify_defect(g: Graph, buckets, lam: Fraction) -> oracle.Verdict:
    res = oracle.Verdict()
    d = defects(g, buckets)
    for v in range(g.n):
        if d[v] > lam * g.degree(v):
            res.fail((v, d[v], g.degree(v)))
    return res


def verify_result(g: Graph, lists: ListAssignment | None, obj: dict, result: dict) -> dict:
    algorithm = result.get("algorithm")
    verdicts: dict[str, oracle.Verdict] = {}
    if "coloring" in result:
        col = result["coloring"]
        verdicts["proper"] = oracle.verify_proper(g, col)
        if lists is not None and algorithm != "linial":
            verdicts["lists"] = oracle.verify_list_respecting(lists, col)
        if algorithm in ("degplus1", "bni", "arboricity"):
            verdicts["total"] = oracle.verify_total(col)
    elif "edge_coloring" in result:
        colors = {(u, v): c for u, v, c in result["edge_coloring"]}
        verdicts["edges"] = oracle.verify_edge_coloring(g, colors)
        edge_lists = obj.get("edge_lists")
        if edge_lists is not None:
            res = oracle.Verdict()
            for i, (u, v) in enumerate(g.edges()):
                if colors.get((u, v)) not in set(edge_lists[i]):
                    res.fail((u, v, colors.get((u, v))))
            verdicts["edge_lists"] = res
    elif "partition" in result:
        part = result["partition"]
        params = result.get("params", {})
        eps = as_fraction(params.get("epsilon", "1"))
        levels = tuple(part["levels"])
        if params.get("arboricity") is not None:
            beta = [int(params["arboricity"])] * g.n
            o = None
        else:
            o, _ = orient_by_degeneracy(g)
            beta = o.out_degree
        hp = HPartition(levels, part["h"], 2 + eps, tuple(beta))
        verdicts["hpartition"] = oracle.verify_h_partition(g, o, hp)
    elif "reduction" in result:
        red = result["reduction"]
        params = result.get("params", {})
        eps = as_fraction(params.get("epsilon", "1"))
        lists = _need_lists(lists)
        o, _ = orient_by_degeneracy(g)
        try:
            new_o = Orientation(g, tuple(tuple(sorted(x)) for x in red["orientation"]))
        except GraphError as exc:
            verdicts["reduction"] = oracle.Verdict(False, [("orientation", str(exc))])
        else:
            outcome = SimpleNamespace(
                subspace_index=tuple(red["subspace_index"]),
                new_orientation=new_o,
                new_lists=tuple(tuple(l) for l in red["new_lists"]),
                new_beta=tuple(red["new_beta"]),
            )
            eta = min(int(params.get("eta", red["eta"])), lists.size)
            verdicts["reduction"] = oracle.verify_oriented_reduction(g, o, lists, outcome, eta, 2 + eps)
    elif "buckets" in result:
        verdicts["defect"] = _verify_defect(g, result["buckets"], as_fraction(result["params"]["lambda"]))
    else:
        raise UsageError("result file has nothing to verify")
    return {
        "ok": all(v.ok for v in verdicts.values()),
        "checks": {k: v.to_dict() for k, v in verdicts.items()},
    }


# -- commands -------------------------------------------------------------------------


def cmd_generate(args) -> int:
    g = generate(args.kind, args.n, p=args.p, seed=args.seed, width=args.width)
    lists, space = make_lists(g, args.lists, args.seed, args.epsilon, args.r, args.arboricity)
    obj = instance_to_json(
        g, lists, space, {"kind": args.kind, "n": args.n, "p": args.p, "seed": args.seed, "lists": args.lists}
    )
    _write_json(obj, args.out)
    return EXIT_OK


def cmd_run(args) -> int:
    g, lists, obj = load_instance(args.instance)
    if args.arboricity is None and "arboricity" in obj.get("meta", {}):
        args.arboricity = obj["meta"]["arboricity"]
    result = execute(args.algorithm, g, lists, obj, args)
    if args.algorithm == "hpartition":
        result["params"]["arboricity"] = args.arboricity
    _write_json(result, args.out)
    if not result["ok"]:
        print(json.dumps(result["validation"]), file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


def cmd_verify(args) -> int:
    g, lists, obj = load_instance(args.instance)
    try:
        result = json.loads(Path(args.result).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read result {args.result}: {exc}") from exc
    report = verify_result(g, lists, obj, result)
    _write_json(report, args.out)
    return EXIT_OK if report["ok"] else EXIT_INVALID


BENCH_FIELDS = ("algorithm", "kind", "n", "delta", "r", "epsilon", "rounds", "max_payload_bits", "ok")


def _expand(entry: dict) -> list[dict]:
    keys = sorted(entry)
    values = [entry[k] if isinstance(entry[k], list) else [entry[k]] for k in keys]
    return [dict(zip(keys, combo)) for combo in itertools.product(*values)]


def run_bench(suite: list[dict], defaults: argparse.Namespace) -> list[dict]:
    rows = []
    for entry in suite:
        for spec in _expand(entry):
            args = argparse.Namespace(**vars(defaults))
            for k, v in spec.items():
                setattr(args, k.replace("-", "_"), v)
            g = generate(args.kind, args.n, p=args.p, seed=args.seed, width=args.width)
            lists = None
            if args.algorithm not in ("linial", "defective", "hpartition", "edgecolor"):
                ls, space = make_lists(g, args.lists, args.seed, args.epsilon, args.r, args.arboricity)
                lists = ListAssignment.of(ls, space)
            result = execute(args.algorithm, g, lists, {}, args)
            rows.append(
                {
                    "algorithm": args.algorithm,
                    "kind": args.kind,
                    "n": g.n,
                    "delta": g.max_degree(),
                    "r": args.r,
                    "epsilon": str(as_fraction(args.epsilon)),
                    "rounds": result["metrics"]["rounds"],
                    "max_payload_bits": result["metrics"]["max_payload_bits"],
                    "ok": result["ok"],
                }
            )
    return rows


def cmd_bench(args) -> int:
    if args.suite:
        try:
            suite = json.loads(Path(args.suite).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read suite {args.suite}: {exc}") from exc
    else:
        suite = []
    if isinstance(suite, dict):
        suite = suite.get("entries", [])
    rows = run_bench(suite, args)
    if args.format == "json":
        text = json.dumps(rows, indent=2) + "\n"
    else:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=BENCH_FIELDS, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        text = buf.getvalue()
    if args.out and args.out != "-":
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if all(r["ok"] for r in rows) else EXIT_INVALID


def _write_json(obj: dict, out: str | None) -> None:
    text = json.dumps(obj, indent=2, default=str) + "\n"
    if out and out != "-":
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# -- argument parsing -------------------------------------------------------------------


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON file whose keys mirror the flags; flags win")
    p.add_argument("--mode", choices=("local", "congest"), default="local")
    p.add_argument("--budget-bits", type=int, default=None)
    p.add_argument("--epsilon", type=float, default=1.0)
    p.add_argument("--lam", type=float, default=0.5, help="lambda for the defective coloring")
    p.add_argument("--r", type=int, default=2)
    p.add_argument("--eta", type=int, default=2)
    p.add_argument("--theta", type=int, default=2)
    p.add_argument("--arboricity", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-rounds", type=int, default=10**9)
    p.add_argument("--max-space-exponent", type=int, default=3)
    p.add_argument("--emulated", action="store_true")
    p.add_argument("--out", default="-")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="distcolor", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    gen = sub.add_parser("generate", help="write a random instance")
    gen.add_argument("kind", choices=GENERATOR_KINDS)
    gen.add_argument("n", type=int)
    gen.add_argument("--p", type=float, default=0.1)
    gen.add_argument("--width", type=float, default=0.1)
    gen.add_argument("--lists", choices=LIST_KINDS, default="degplus1")
    _common(gen)
    run = sub.add_parser("run", help="run an algorithm on an instance")
    run.add_argument("algorithm", choices=ALGORITHMS)
    run.add_argument("instance")
    _common(run)
    ver = sub.add_parser("verify", help="re-validate a result file")
    ver.add_argument("instance")
    ver.add_argument("result")
    _common(ver)
    bench = sub.add_parser("bench", help="run a suite and tabulate rounds")
    bench.add_argument("suite", nargs="?", help="JSON list of entries; list values are swept")
    bench.add_argument("--format", choices=("csv", "json"), default="csv")
    bench.add_argument("--algorithm", choices=ALGORITHMS, default="degplus1")
    bench.add_argument("--kind", choices=GENERATOR_KINDS, default="gnp")
    bench.add_argument("--n", type=int, default=64)
    bench.add_argument("--p", type=float, default=0.1)
    bench.add_argument("--width", type=float, default=0.1)
    bench.add_argument("--lists", choices=LIST_KINDS, default="degplus1")
    _common(bench)
    return parser


def parse_args(argv: list[str] | None) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "config", None):
        try:
            cfg = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(cfg, dict):
            raise UsageError("config must be a JSON object")
        # re-parse with the config as defaults so explicit flags still win
        sub = parser._subparsers._group_actions[0].choices[args.command]  # type: ignore[union-attr]
        known = {a.dest for a in sub._actions}
        unknown = sorted(k for k in (key.replace("-", "_") for key in cfg) if k not in known)
        if unknown:
            raise UsageError(f"unknown config keys: {unknown}")
        sub.set_defaults(**{k.replace("-", "_"): v for k, v in cfg.items()})
        args = parser.parse_args(argv)
    return args


COMMANDS = {"generate": cmd_generate, "run": cmd_run, "verify": cmd_verify, "bench": cmd_bench}


def main(argv: list[str] | None = None) -> int:
    try:
        args = parse_args(argv)
        return COMMANDS[args.command](args)
    except SystemExit as exc:  # argparse usage errors
        return EXIT_PRECONDITION if exc.code else EXIT_OK
    except (UsageError, PreconditionError, GraphError, HPartitionStall, oracle.OracleCapExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (CongestViolation, RoundLimitExceeded) as exc:
        print(f"run failed: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except InternalError as exc:
        print(f"internal contradiction: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
