"""Command-line surface: distances, knn-order, filtration, persistence,
bottleneck, pagerank, converge.

Every command is a pure function of its input files, flags, and optional
seed; identical invocations produce byte-identical output.  Results go to
stdout, diagnostics to stderr.  Exit codes: 0 success, 1 input or parse
error, 2 usage error.
"""

from __future__ import annotations

import argparse
import io
import json
import sys

import numpy as np

from .convergence import build_report
from .filtration import complex_to_dump, knn_filtered_complex, vr_filtered_complex
from .geometry import TIE_BY_INDEX, TIE_SEEDED_RANDOM, TieRule, load_points_csv, pairwise_distances
from .knn import ordering_function, orders_to_csv, sym_to_csv, symmetrize
from .pagerank import (
    Graph,
    IterationTrace,
    PageRankConfig,
    load_edge_list,
    paper_initial_condition,
    power_iterate,
    rank_order,
)
from .persistence import compute_persistence, diagram_from_json, diagram_to_csv, diagram_to_json
from . import bottleneck as bn


def _tie_rule(args) -> TieRule:
    if getattr(args, "tie", "by-index") == "random":
        return TieRule(TIE_SEEDED_RANDOM, getattr(args, "seed", 0))
    return TieRule(TIE_BY_INDEX)


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _add_tie_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--tie", choices=["by-index", "random"], default="by-index")
    p.add_argument("--seed", type=int, default=0)


def _add_family_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--points", required=True, help="point-cloud CSV file")
    p.add_argument("--family", choices=["vr", "knn"], default="vr")
    p.add_argument("--sym", choices=["min", "trans", "max"], default="min")
    p.add_argument("--dim-cap", type=int, default=2)
    p.add_argument("--eps-max", type=float, default=None, help="VR value cap (default: none)")
    p.add_argument("--k-max", type=float, default=None, help="kNN order cap (default: N-1)")
    _add_tie_flags(p)


def _build_complex(args):
    cloud = load_points_csv(_read(args.points))
    if args.family == "vr":
        eps = np.inf if args.eps_max is None else args.eps_max
        return vr_filtered_complex(pairwise_distances(cloud), dim_cap=args.dim_cap, eps_max=eps)
    sym = symmetrize(ordering_function(cloud, _tie_rule(args)), args.sym)
    return knn_filtered_complex(sym, dim_cap=args.dim_cap, k_max=args.k_max)


def _cmd_distances(args, out):
    cloud = load_points_csv(_read(args.points))
    d = pairwise_distances(cloud)
    for row in d:
        out.write(",".join(repr(float(v)) for v in row) + "\n")


def _cmd_knn_order(args, out):
    cloud = load_points_csv(_read(args.points))
    orders = ordering_function(cloud, _tie_rule(args))
    if args.sym is None:
        out.write(orders_to_csv(orders))
    else:
        out.write(sym_to_csv(symmetrize(orders, args.sym)))


def _cmd_filtration(args, out):
    out.write(complex_to_dump(_build_complex(args)))


def _cmd_persistence(args, out):
    comp = _build_complex(args)
    max_dim = args.max_dim if args.max_dim is not None else max(comp.dim_cap - 1, 0)
    diag = compute_persistence(comp, max_dim=max_dim)
    if args.format == "json":
        out.write(diagram_to_json(diag) + "\n")
    else:
        out.write(diagram_to_csv(diag))


def _cmd_bottleneck(args, out):
    a = diagram_from_json(_read(args.diagram_a))
    b = diagram_from_json(_read(args.diagram_b))
    out.write(f"{bn.bottleneck(a, b, args.dim)}\n")


def _load_graph(args) -> Graph:
    return load_edge_list(_read(args.edges), undirected=not args.directed)


def _pagerank_config(args, n: int) -> PageRankConfig:
    if args.x0 == "paper":
        x0 = paper_initial_condition(n)
    elif args.x0 == "uniform":
        x0 = np.full(n, 1.0 / n)
    else:
        x0 = np.array([float(tok) for tok in _read(args.x0).split()])
        if x0.size != n:
            raise ValueError(f"x0 file has {x0.size} entries for {n} nodes")
    return PageRankConfig(alpha=args.alpha, x0=x0, max_iter=args.iters, tol=args.tol)


def _trace_json(trace: IterationTrace) -> str:
    obj = {
        "labels": list(trace.labels) if trace.labels else None,
        "iterates": [[float(v) for v in row] for row in trace.iterates],
        "pi": [float(v) for v in trace.pi],
    }
    return json.dumps(obj)


def _cmd_pagerank(args, out):
    g = _load_graph(args)
    trace = power_iterate(g, _pagerank_config(args, g.n))
    if args.format == "json":
        out.write(_trace_json(trace) + "\n")
        return
    ranks = rank_order(trace.pi)
    out.write("index,label,pi,rank\n")
    for i in range(g.n):
        label = trace.labels[i] if trace.labels else str(i)
        out.write(f"{i},{label},{trace.pi[i]!r},{ranks[i]}\n")


def _cmd_converge(args, out, err):
    g = _load_graph(args)
    trace = power_iterate(g, _pagerank_config(args, g.n))
    methods = tuple(args.sym.split(","))
    dims = tuple(int(d) for d in args.dims.split(","))
    if not args.quiet:
        err.write(f"trace: n={g.n} horizon={trace.horizon}\n")
    report = build_report(trace, methods=methods, dims=dims, tie_rule=_tie_rule(args))

    header = ["t", "norm_l1", "norm_l2", "norm_linf", "rank_diff"]
    header += [f"db_vr_h{d}" for d in dims]
    header += [f"db_knn_{m}_h{d}" for m in methods for d in dims]
    out.write(",".join(header) + "\n")
    for t in range(report.horizon + 1):
        row = [str(t)]
        row += [repr(float(report.norm_curves[k][t])) for k in ("l1", "l2", "linf")]
        row.append(str(int(report.rank_diff[t])))
        row += [repr(float(report.vr_curves[d][t])) for d in dims]
        row += [repr(float(report.knn_curves[(m, d)][t])) for m in methods for d in dims]
        out.write(",".join(row) + "\n")

    summary = {"t_star_rank": report.t_star_rank, "horizon": report.horizon}
    for m in methods:
        summary[f"t_star_knn_global_{m}"] = report.t_star_knn[m]
    text = json.dumps(summary)
    if args.summary:
        with open(args.summary, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        err.write(text + "\n")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="knnph")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("distances", help="pairwise distance matrix as CSV")
    p.add_argument("--points", required=True)

    p = sub.add_parser("knn-order", help="kNN ordering matrix as CSV")
    p.add_argument("--points", required=True)
    p.add_argument("--sym", choices=["min", "trans", "max"], default=None,
                   help="emit a symmetrized matrix instead of raw orders")
    _add_tie_flags(p)

    p = sub.add_parser("filtration", help="dump a filtered complex")
    _add_family_flags(p)

    p = sub.add_parser("persistence", help="persistence diagram of a point cloud")
    _add_family_flags(p)
    p.add_argument("--max-dim", type=int, default=None)
    p.add_argument("--format", choices=["json", "csv"], default="json")

    p = sub.add_parser("bottleneck", help="bottleneck distance between diagram files")
    p.add_argument("diagram_a")
    p.add_argument("diagram_b")
    p.add_argument("--dim", type=int, required=True)

    p = sub.add_parser("pagerank", help="power-iteration trace or pi/rank table")
    p.add_argument("--edges", required=True)
    p.add_argument("--alpha", type=float, default=0.85)
    p.add_argument("--iters", type=int, default=30)
    p.add_argument("--directed", action="store_true")
    p.add_argument("--x0", default="paper", help="paper | uniform | FILE")
    p.add_argument("--tol", type=float, default=1e-14)
    p.add_argument("--format", choices=["json", "csv"], default="json")

    p = sub.add_parser("converge", help="convergence curves CSV plus JSON summary")
    p.add_argument("--edges", required=True)
    p.add_argument("--alpha", type=float, default=0.85)
    p.add_argument("--iters", type=int, default=30)
    p.add_argument("--directed", action="store_true")
    p.add_argument("--x0", default="paper")
    p.add_argument("--tol", type=float, default=1e-14)
    p.add_argument("--dims", default="0", help="comma-separated homology dimensions")
    p.add_argument("--sym", default="min,max", help="comma-separated symmetrizations")
    p.add_argument("--summary", default=None, help="write the JSON summary to this file")
    p.add_argument("--quiet", action="store_true")
    _add_tie_flags(p)
    return parser


def run(argv, stdin: str = "") -> tuple[int, str, str]:
    """Execute one command; returns (exit code, stdout, stderr)."""
    out, err = io.StringIO(), io.StringIO()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse prints its own usage message
        return int(exc.code or 0), out.getvalue(), err.getvalue()
    try:
        if args.command == "distances":
            _cmd_distances(args, out)
        elif args.command == "knn-order":
            _cmd_knn_order(args, out)
        elif args.command == "filtration":
            _cmd_filtration(args, out)
        elif args.command == "persistence":
            _cmd_persistence(args, out)
        elif args.command == "bottleneck":
            _cmd_bottleneck(args, out)
        elif args.command == "pagerank":
            _cmd_pagerank(args, out)
        elif args.command == "converge":
            _cmd_converge(args, out, err)
    except (ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        err.write(f"error: {exc}\n")
        return 1, out.getvalue(), err.getvalue()
    return 0, out.getvalue(), err.getvalue()


def main() -> None:
    code, out, err = run(sys.argv[1:])
    sys.stdout.write(out)
    sys.stderr.write(err)
    raise SystemExit(code)
