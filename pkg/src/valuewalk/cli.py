"""Command-line interface.

Subcommands: detect, select, indicators, eval, graph-stats, gen.
Exit code 0 on success, 1 with a message on stderr for any input,
configuration or data error.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import json
import sys

from . import __version__
from .dataset import compute_stats, load_csv, preprocess, write_csv
from .evaluation import auc, complexity_report, generate_synthetic
from .factors import conditional_influence, intra_outlierness, lift_influence
from .graph import build_cbrw_graph, build_sdrw_graph, dump_edges, graph_stats
from .peeling import peel_subgraphs
from .pipeline import METHODS, DetectorConfig, detect, select
from .scoring import density_graph, walk_transition
from .walks import convergence_trace


@contextlib.contextmanager
def _open_out(path):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            yield fh


def _add_io_args(p, needs_input=True):
    if needs_input:
        p.add_argument("--input", "-i", required=True, help="input CSV file")
        p.add_argument("--label-column", help="label column name or 0-based index")
        p.add_argument("--no-header", action="store_true", help="input has no header row")
        p.add_argument("--delimiter", default=",", help="CSV delimiter (default ',')")
    p.add_argument("--output", "-o", default="-", help="output path, '-' for stdout")
    p.add_argument("--format", choices=("csv", "json"), default="csv")


def _add_detector_args(p, methods=METHODS):
    p.add_argument("--method", choices=methods, default="cbrw")
    p.add_argument("--alpha", type=float, default=0.95, help="damping factor (walk methods)")
    p.add_argument("--tol", type=float, default=0.001, help="L1 convergence threshold")
    p.add_argument("--max-iter", type=int, default=100)
    p.add_argument("--lift-scaling", choices=("support", "frequency"), default="support")
    p.add_argument("--threads", type=int, default=1)


def _load(args):
    return load_csv(
        args.input,
        has_header=not args.no_header,
        label_column=args.label_column,
        delimiter=args.delimiter,
    )


def _config(args, top_ratio=None, min_rel=None):
    return DetectorConfig(
        method=args.method,
        alpha=args.alpha,
        tol=args.tol,
        max_iter=args.max_iter,
        lift_scaling=args.lift_scaling,
        threads=args.threads,
        top_ratio=top_ratio if top_ratio is not None else 0.5,
        min_rel=min_rel,
    )


def _cmd_detect(args) -> int:
    ds = _load(args)
    result = detect(ds, _config(args))
    if args.trace:
        if not args.method.startswith("cbrw"):
            raise ValueError("--trace requires a cbrw-family method")
        _, w = walk_transition(result.stats, args.method)
        trace = convergence_trace(w, alpha=args.alpha, tol=args.tol, max_iter=args.max_iter)
        with open(args.trace, "w", newline="", encoding="utf-8") as fh:
            wr = csv.writer(fh)
            wr.writerow(["iteration", "l1_change"])
            for i, d in enumerate(trace, start=1):
                wr.writerow([i, f"{d:.17g}"])
    if args.dump_peeling:
        if not args.method.startswith("sdrw"):
            raise ValueError("--dump-peeling requires an sdrw-family method")
        peel = peel_subgraphs(density_graph(result.stats, args.method, args.lift_scaling))
        with open(args.dump_peeling, "w", newline="", encoding="utf-8") as fh:
            wr = csv.writer(fh)
            wr.writerow(["step", "removed_value", "subgraph_size", "density"])
            n = peel.n_nodes
            for t, v in enumerate(peel.removal_order):
                wr.writerow(
                    [t + 1, result.dataset.value_names[v], n - t, f"{peel.densities[t]:.17g}"]
                )

    scores = result.scores
    rank = scores.rank_of()
    with _open_out(args.output) as fh:
        if args.format == "json":
            payload = [
                {"index": i, "score": float(scores.score[i]), "rank": int(rank[i])}
                for i in range(scores.n_objects)
            ]
            json.dump(payload, fh, indent=2)
            fh.write("\n")
        else:
            wr = csv.writer(fh)
            wr.writerow(["index", "score", "rank"])
            for i in range(scores.n_objects):
                wr.writerow([i, f"{scores.score[i]:.12g}", int(rank[i])])
    return 0


def _cmd_select(args) -> int:
    ds = _load(args)
    config = _config(args, top_ratio=args.top_ratio, min_rel=args.min_rel)
    result = select(ds, config, emit_reduced=args.reduced_output is not None)
    if args.reduced_output:
        with open(args.reduced_output, "w", newline="", encoding="utf-8") as fh:
            write_csv(result.reduced, fh)
    kept = set(result.feature_ids)
    with _open_out(args.output) as fh:
        if args.format == "json":
            payload = {
                "selected": result.feature_names,
                "relevance": {
                    name: float(result.relevance.rel[j])
                    for j, name in enumerate(result.dataset.feature_names)
                },
            }
            json.dump(payload, fh, indent=2)
            fh.write("\n")
        else:
            wr = csv.writer(fh)
            wr.writerow(["feature", "relevance", "selected"])
            for j, name in enumerate(result.dataset.feature_names):
                wr.writerow([name, f"{result.relevance.rel[j]:.12g}", int(j in kept)])
    return 0


def _cmd_indicators(args) -> int:
    ds = _load(args)
    if ds.labels is None:
        raise ValueError("indicators need labels; pass --label-column")
    ds = preprocess(ds)
    report = complexity_report(ds, theta=args.theta, epsilon=args.epsilon)
    values = {
        "kappa_vcc": report.kappa_vcc,
        "kappa_het": report.kappa_het,
        "kappa_ins": report.kappa_ins,
        "kappa_fnl": report.kappa_fnl,
    }
    with _open_out(args.output) as fh:
        if args.format == "json":
            payload = dict(values, params=report.params)
            if args.per_feature:
                payload["feature_efficiency"] = {
                    name: float(report.per_feature_efficiency[j])
                    for j, name in enumerate(ds.feature_names)
                }
            json.dump(payload, fh, indent=2)
            fh.write("\n")
        else:
            wr = csv.writer(fh)
            wr.writerow(values.keys())
            wr.writerow([f"{v:.6g}" for v in values.values()])
    return 0


def _cmd_eval(args) -> int:
    ds = _load(args)
    if ds.labels is None:
        raise ValueError("eval needs labels; pass --label-column")
    result = detect(ds, _config(args))
    score = auc(result.scores.score, result.dataset.labels)
    with _open_out(args.output) as fh:
        if args.format == "json":
            json.dump({"method": args.method, "auc": score}, fh, indent=2)
            fh.write("\n")
        else:
            fh.write("method,auc\n")
            fh.write(f"{args.method},{score:.6f}\n")
    return 0


def _cmd_graph_stats(args) -> int:
    ds = preprocess(_load(args))
    stats = compute_stats(ds, threads=args.threads)
    delta = intra_outlierness(stats)
    if args.graph == "cbrw":
        g = build_cbrw_graph(delta, conditional_influence(stats))
    else:
        g = build_sdrw_graph(delta, lift_influence(stats, args.lift_scaling))
    if args.dump_edges:
        with open(args.dump_edges, "w", encoding="utf-8") as fh:
            dump_edges(g, fh)
    info = graph_stats(g)
    payload = {
        "graph": args.graph,
        "nodes": g.n_nodes,
        "edges": int(g.adjacency.nnz if g.directed else g.adjacency.nnz // 2),
        "diameter": info["diameter"],
        "clustering_coefficient": info["clustering_coefficient"],
    }
    with _open_out(args.output) as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
    return 0


def _cmd_gen(args) -> int:
    ds = generate_synthetic(
        n_objects=args.n_objects,
        n_relevant=args.n_relevant,
        n_noisy=args.n_noisy,
        n_outliers=args.n_outliers,
        coupling_strength=args.coupling,
        seed=args.seed,
    )
    with _open_out(args.output) as fh:
        write_csv(ds, fh)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="valuewalk",
        description="Categorical outlier detection on value-value graphs",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("detect", help="score and rank objects by outlierness")
    _add_io_args(p)
    _add_detector_args(p)
    p.add_argument("--trace", help="write the per-iteration convergence trace CSV here")
    p.add_argument("--dump-peeling", help="write peeling order and densities CSV here")
    p.set_defaults(fn=_cmd_detect)

    p = sub.add_parser("select", help="rank and select outlying features")
    _add_io_args(p)
    _add_detector_args(p, methods=("cbrw", "sdrw"))
    p.add_argument("--top-ratio", type=float, default=0.5, help="keep top ceil(ratio*D) features")
    p.add_argument("--min-rel", type=float, default=None, help="keep features with relevance >= this")
    p.add_argument("--reduced-output", help="also write the reduced dataset CSV here")
    p.set_defaults(fn=_cmd_select)

    p = sub.add_parser("indicators", help="data-complexity indicators (needs labels)")
    _add_io_args(p)
    p.add_argument("--theta", type=float, default=0.05, help="rare-value frequency threshold")
    p.add_argument("--epsilon", type=float, default=0.001)
    p.add_argument("--per-feature", action="store_true", help="include per-feature efficiencies")
    p.set_defaults(fn=_cmd_indicators)

    p = sub.add_parser("eval", help="detect and report ranking AUC against labels")
    _add_io_args(p)
    _add_detector_args(p)
    p.set_defaults(fn=_cmd_eval)

    p = sub.add_parser("graph-stats", help="diameter and clustering of the value graph")
    _add_io_args(p)
    p.add_argument("--graph", choices=("cbrw", "sdrw"), default="cbrw")
    p.add_argument("--lift-scaling", choices=("support", "frequency"), default="support")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--dump-edges", help="write 'u v weight' edge list here")
    p.set_defaults(fn=_cmd_graph_stats)

    p = sub.add_parser("gen", help="generate seeded synthetic benchmark data")
    _add_io_args(p, needs_input=False)
    p.add_argument("--n-objects", type=int, default=1000)
    p.add_argument("--n-relevant", type=int, default=4)
    p.add_argument("--n-noisy", type=int, default=4)
    p.add_argument("--n-outliers", type=int, default=20)
    p.add_argument("--coupling", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=_cmd_gen)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
