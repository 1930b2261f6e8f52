"""Command-line entry point: ``reslearn {learn-local,learn-global,cluster,eval,gen,stats}``."""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import math
import sys
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .community import LouvainConfig, ari, f1_set, louvain, nmi
from .globalfit import default_lambda_range, learn_global, learn_global_from_grid, shared_grid
from .graph import (Graph, GraphParseError, bfs_grow, conductance, connected_components, load_edge_list, read_clustering,
                    read_node_set, write_clustering, write_edge_list, write_node_set)
from .lambdacc import MODES, modularity
from .local import flowimprove_epsilon, learn_local
from .metric_lp import LpConfig, LpOracle
from .paramlearn import write_query_log
from .synth import PlantedSpec, planted_partition, ring_of_cliques

log = logging.getLogger("reslearn")

MANIFEST = "manifest.json"


@dataclass
class RunManifest:
    command: list[str]
    config: dict
    inputs: dict[str, str]
    seed: int
    version: str = __version__
    timings: dict[str, float] = field(default_factory=dict)

    def write(self, out: Path) -> None:
        (out / MANIFEST).write_text(_dumps(asdict(self)))


def _jsonable(x):
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, Fraction):
        return float(x)
    if isinstance(x, Path):
        return str(x)
    raise TypeError(f"not JSON serializable: {type(x)}")


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=_jsonable) + "\n"


def file_hash(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def parse_range(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"range must look like lo:hi, got {text!r}") from None
    if not lo < hi:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return lo, hi


def _tsv_with_manifest(path: Path) -> None:
    """Prefix an emitted TSV with a comment pointing at its manifest."""
    body = path.read_text()
    path.write_text(f"# manifest: {MANIFEST}\n" + body)


class _Run:
    """Collects inputs and timings for one command, then writes the manifest."""

    def __init__(self, args, inputs):
        self.out = Path(args.out)
        self.out.mkdir(parents=True, exist_ok=True)
        config = {k: v for k, v in vars(args).items() if k not in ("func", "argv")}
        self.manifest = RunManifest(["reslearn", *args.argv], config, {str(p): file_hash(p) for p in inputs if p}, args.seed)
        self._t = time.perf_counter()
        self._t0 = self._t

    def lap(self, name: str) -> None:
        now = time.perf_counter()
        self.manifest.timings[name] = round(now - self._t, 6)
        self._t = now

    def finish(self, report: dict) -> None:
        self.manifest.timings["total"] = round(time.perf_counter() - self._t0, 6)
        report = {"manifest": MANIFEST, **report}
        (self.out / "report.json").write_text(_dumps(report))
        self.manifest.write(self.out)
        sys.stdout.write(_dumps(report))


# ------------------------------------------------------------------ commands

def cmd_learn_local(args) -> int:
    run = _Run(args, [args.graph, args.seeds, args.ref])
    G = load_edge_list(args.graph)
    X = read_node_set(G, args.seeds)
    R = read_node_set(G, args.ref) if args.ref else bfs_grow(G, X, args.grow * len(X))
    if args.epsilon == "inf":
        eps = math.inf
    elif args.epsilon == "flowimprove":
        eps = flowimprove_epsilon(G, R)
    else:
        eps = float(args.epsilon)
    lo, hi = args.range or (None, None)
    run.lap("load")
    rep = learn_local(G, X, R=R, epsilon=eps, tol=args.tol, tau_eq=args.tau_eq, lo=lo, hi=hi)
    run.lap("learn")
    write_query_log(rep.result.queries, run.out / "queries.tsv")
    _tsv_with_manifest(run.out / "queries.tsv")
    write_node_set(G, rep.S, run.out / "cluster.txt")
    summary = rep.summary(G)
    summary["epsilon"] = "inf" if math.isinf(eps) else eps
    summary["queries_file"] = "queries.tsv"
    summary["events"] = rep.result.events
    run.finish(summary)
    return 0


def cmd_learn_global(args) -> int:
    paths = args.example_clusters
    run = _Run(args, [args.graph, *paths])
    G = load_edge_list(args.graph)
    examples = [read_clustering(G, p) for p in paths]
    lo, hi = args.range or default_lambda_range(G, args.mode)
    lp = LpConfig(tol=args.lp_tol, feas_tol=args.lp_tol, max_n=args.lp_max_n)
    tau_eq = args.tau_eq if args.tau_eq is not None else 10 * lp.tol
    run.lap("load")
    reports = []
    if args.grid:
        samples = shared_grid(G, args.mode, lo, hi, args.grid, lp, args.cache_dir, args.jobs)
        run.lap("grid")
        (run.out / "grid.tsv").write_text("lambda\tG\n" + "".join(f"{a!r}\t{b!r}\n" for a, b in samples))
        _tsv_with_manifest(run.out / "grid.tsv")
        for C in examples:
            reports.append(learn_global_from_grid(G, C, samples, args.mode, tol=args.tol, tau_eq=tau_eq))
    else:
        oracle = LpOracle(G, args.mode, lp, args.cache_dir)
        for C in examples:
            reports.append(learn_global(G, C, args.mode, lo, hi, tol=args.tol, lp=lp, tau_eq=tau_eq, oracle=oracle))
    run.lap("learn")
    results = []
    for i, (path, rep) in enumerate(zip(paths, reports)):
        curve = run.out / f"curve_{i}.tsv"
        write_query_log(rep.result.queries, curve)
        _tsv_with_manifest(curve)
        results.append({"example": str(path), "curve_file": curve.name, **rep.summary(),
                        "events": rep.result.events})
    run.finish({"mode": args.mode, "protocol": "grid" if args.grid else "bisect", "results": results})
    return 0


def _resolve_lambda(text: str, G: Graph) -> float:
    if text == "modularity":
        return 1.0 / (2 * G.m)
    return float(text)


def cmd_cluster(args) -> int:
    run = _Run(args, [args.graph])
    G = load_edge_list(args.graph)
    lam = _resolve_lambda(args.lam, G)
    C = louvain(G, LouvainConfig(lam=lam, mode=args.mode, seed=args.seed))
    run.lap("cluster")
    path = run.out / "clustering.tsv"
    write_clustering(G, C, path)
    _tsv_with_manifest(path)
    run.finish({"lambda": lam, "mode": args.mode, "clusters": C.k, "clustering_file": path.name,
                "modularity": modularity(G, C)})
    return 0


def cmd_eval(args) -> int:
    run = _Run(args, [args.graph, args.a, args.b, args.set, args.target])
    G = load_edge_list(args.graph)
    report = {}
    if args.a and args.b:
        A, B = read_clustering(G, args.a), read_clustering(G, args.b)
        report.update(ari=ari(A, B), nmi=nmi(A, B))
    if args.set and args.target:
        S, X = read_node_set(G, args.set), read_node_set(G, args.target)
        report["f1"] = f1_set(S, X)
        for name, T in (("phi_set", S), ("phi_target", X)):
            try:
                report[name] = float(conductance(G, T))
            except ValueError:
                report[name] = None
    if not report:
        raise SystemExit("eval needs --a and --b, or --set and --target")
    run.finish(report)
    return 0


def cmd_gen(args) -> int:
    run = _Run(args, [])
    if args.kind == "ring":
        G, C = ring_of_cliques(args.c, args.k)
    else:
        sizes = tuple(int(s) for s in args.sizes.split(","))
        G, C = planted_partition(PlantedSpec(sizes, args.p_in, args.p_out, args.seed))
    write_edge_list(G, run.out / "graph.txt")
    write_clustering(G, C, run.out / "planted.tsv")
    _tsv_with_manifest(run.out / "planted.tsv")
    run.finish({"kind": args.kind, "n": G.n, "m": G.m, "graph_file": "graph.txt",
                "clustering_file": "planted.tsv", "graph_digest": G.digest()})
    return 0


def graph_stats(G: Graph) -> dict:
    d = G.degrees
    comp = connected_components(G)
    return {"n": G.n, "m": G.m, "degree_min": int(d.min()) if G.n else 0, "degree_max": int(d.max()) if G.n else 0,
            "degree_mean": float(d.mean()) if G.n else 0.0, "components": int(comp.max()) + 1 if G.n else 0,
            "dropped_self_loops": G.dropped_loops, "dropped_duplicates": G.dropped_duplicates}


def cmd_stats(args) -> int:
    run = _Run(args, [args.graph])
    G = load_edge_list(args.graph)
    run.finish(graph_stats(G))
    return 0


# -------------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="reslearn", description=__doc__)
    p.add_argument("--verbose", "-v", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, graph=True):
        if graph:
            sp.add_argument("--graph", required=True, help="edge list file")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--out", required=True, help="output directory")

    sp = sub.add_parser("learn-local", help="learn alpha for a seed set")
    common(sp)
    sp.add_argument("--seeds", required=True, help="example set X, one node id per line")
    sp.add_argument("--ref", help="reference set R; default grows X by BFS")
    sp.add_argument("--grow", type=int, default=5, help="|R| = grow * |X| when --ref is absent")
    sp.add_argument("--epsilon", default="inf", help="inf, flowimprove, or a positive number")
    sp.add_argument("--tol", type=float, default=None)
    sp.add_argument("--tau-eq", type=float, default=1e-9)
    sp.add_argument("--range", type=parse_range, default=None, help="lo:hi")
    sp.set_defaults(func=cmd_learn_local)

    sp = sub.add_parser("learn-global", help="learn lambda for example clusterings")
    common(sp)
    sp.add_argument("--example-clusters", nargs="+", required=True, help="node<TAB>label files")
    sp.add_argument("--mode", choices=MODES, default="degree")
    sp.add_argument("--range", type=parse_range, default=None, help="lo:hi")
    sp.add_argument("--tol", type=float, default=None)
    sp.add_argument("--tau-eq", type=float, default=None)
    sp.add_argument("--lp-tol", type=float, default=1e-6)
    sp.add_argument("--lp-max-n", type=int, default=LpConfig.max_n, help="refuse LPs on larger graphs")
    sp.add_argument("--grid", type=int, default=0, help="shared grid of N LP samples; 0 bisects with LP queries")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--cache-dir", default=None)
    sp.set_defaults(func=cmd_learn_global)

    sp = sub.add_parser("cluster", help="Louvain for LambdaCC")
    common(sp)
    sp.add_argument("--lambda", dest="lam", required=True, help="a number or 'modularity' for 1/(2m)")
    sp.add_argument("--mode", choices=MODES, default="degree")
    sp.set_defaults(func=cmd_cluster)

    sp = sub.add_parser("eval", help="compare clusterings or sets")
    common(sp)
    sp.add_argument("--a")
    sp.add_argument("--b")
    sp.add_argument("--set")
    sp.add_argument("--target")
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("gen", help="generate a synthetic graph")
    common(sp, graph=False)
    sp.add_argument("kind", choices=("ring", "planted"))
    sp.add_argument("--c", type=int, default=8)
    sp.add_argument("--k", type=int, default=5)
    sp.add_argument("--sizes", default="10,10,10,10")
    sp.add_argument("--p-in", type=float, default=0.5)
    sp.add_argument("--p-out", type=float, default=0.05)
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("stats", help="graph statistics")
    common(sp)
    sp.set_defaults(func=cmd_stats)
    return p


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    args.argv = argv
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (GraphParseError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
