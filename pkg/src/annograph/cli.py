"""Pipeline driver: extract -> generate -> eval -> compare.

Each stage reads and writes plain JSON or edge-list files, so a pipeline
can be split across processes or machines and resumed at any stage.
Ensemble member i of a run with seed s draws its randomness from the
stream keyed by (s, i); members are independent of each other and of the
ensemble size, so outputs are byte-stable for a fixed config.

Exit codes: 0 success, 1 validation failure, 2 I/O or parse error.
"""

from __future__ import annotations

import argparse
import json
import multiprocessing
import sys
from pathlib import Path

import numpy as np

from .construct import construct_1k, construct_2k
from .copula import rescale_add
from .fit import FitError, FittedCCDF, fit_ccdf
from .graph_core import EmptyGraphError, GraphError, StubColor
from .ingest import (ParseError, REL_SIBLING, clean_and_build, load_graph,
                     parse_edge_list, write_edge_list)
from .metrics import (GraphMetricsReport, ensemble_stats, scalar_report,
                      select_representative, write_degree_scatter)
from .profile import SummaryProfile, extract_profile, marginal_ad

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2

_COLOR_NAMES = ("customer", "provider", "peer")


def member_rng(seed: int, index: int) -> np.random.Generator:
    """Independent random stream for one ensemble member."""
    return np.random.default_rng(np.random.SeedSequence([seed, index]))


def _write_json(path: Path, payload) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def cmd_extract(args) -> int:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    graph, report = load_graph(args.input)
    prof = extract_profile(graph)
    prof.save(out_dir / "profile.json")
    _write_json(out_dir / "cleaning_report.json", report.to_dict())
    print(f"profile: {prof.n} nodes, {prof.m} edges "
          f"({prof.jdd_c2p.shape[0]} c2p, {prof.jdd_p2p.shape[0]} p2p)")
    for key, val in report.to_dict().items():
        print(f"  {key}: {val}")
    return EXIT_OK


def _fit_marginals(prof: SummaryProfile, size: int) -> list[FittedCCDF]:
    return [fit_ccdf(marginal_ad(prof, color), size)
            for color in (StubColor.CUSTOMER, StubColor.PROVIDER, StubColor.PEER)]


def _generate_member(task) -> dict:
    prof, fits, seed, index, size, order, out_dir = task
    rng = member_rng(seed, index)
    add = rescale_add(prof, fits, size, rng)
    if order == "2k":
        graph, construction = construct_2k(add, prof, rng)
    else:
        graph = construct_1k(add, rng)
        construction = {}
    _write_json(out_dir / f"rescaled_add_{index:03d}.json",
                [[int(c) for c in row] for row in add])
    with open(out_dir / f"graph_{index:03d}.txt", "w", encoding="utf-8") as fh:
        write_edge_list(graph, fh)
    meta = {
        "seed": seed,
        "member": index,
        "order": order,
        "target_size": size,
        "nodes": graph.n,
        "edges": graph.n_edges,
        "c2p_edges": graph.c2p_count,
        "p2p_edges": graph.p2p_count,
        "max_degree": graph.max_degree(),
        "construction": construction,
    }
    _write_json(out_dir / f"meta_{index:03d}.json", meta)
    return meta


def cmd_generate(args) -> int:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    prof = SummaryProfile.load(args.profile)
    fits = _fit_marginals(prof, args.size)
    _write_json(out_dir / "fits.json", {
        "target_size": args.size,
        **{name: fit.to_dict() for name, fit in zip(_COLOR_NAMES, fits)},
    })
    tasks = [(prof, fits, args.seed, i, args.size, args.order, out_dir)
             for i in range(args.count)]
    if args.jobs > 1:
        with multiprocessing.Pool(args.jobs) as pool:
            metas = pool.map(_generate_member, tasks)
    else:
        metas = [_generate_member(t) for t in tasks]
    for meta in metas:
        print(f"graph_{meta['member']:03d}: {meta['nodes']} nodes, "
              f"{meta['edges']} edges, max degree {meta['max_degree']}")
    return EXIT_OK


def _node_count_before_lcc(records) -> int:
    labels = set()
    for rec in records:
        if rec.rel == REL_SIBLING or rec.a == rec.b:
            continue
        labels.add(rec.a)
        labels.add(rec.b)
    return len(labels)


def _eval_member(task) -> dict:
    path, seed, index, sources, out_dir = task
    with open(path, encoding="utf-8") as fh:
        records = parse_edge_list(fh)
    graph, _ = clean_and_build(records)
    before = _node_count_before_lcc(records)
    if graph.n != before:
        raise GraphError(
            f"{path}: graph is disconnected "
            f"({before} nodes, largest component {graph.n})")
    rng = member_rng(seed, index)
    report = scalar_report(graph, sources=sources, rng=rng)
    stem = Path(path).stem
    report.save(out_dir / f"report_{stem}.json")
    with open(out_dir / f"scatter_{stem}.csv", "w", encoding="utf-8") as fh:
        write_degree_scatter(graph, fh)
    return report.to_dict()


def cmd_eval(args) -> int:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    sources = "all" if args.sources == "all" else int(args.sources)
    tasks = [(path, args.seed, i, sources, out_dir)
             for i, path in enumerate(args.graphs)]
    if args.jobs > 1:
        with multiprocessing.Pool(args.jobs) as pool:
            dicts = pool.map(_eval_member, tasks)
    else:
        dicts = [_eval_member(t) for t in tasks]
    reports = [GraphMetricsReport.from_dict(d) for d in dicts]
    for path, rep in zip(args.graphs, reports):
        print(f"{path}: n={rep.nodes} m={rep.edges} "
              f"avg_degree={rep.avg_degree:.3f} max_degree={rep.max_degree} "
              f"assortativity={rep.assortativity:.3f}")
    if len(reports) > 1:
        idx = select_representative(reports, gamma=args.gamma)
        payload = {
            "stats": ensemble_stats(reports),
            "representative": {"index": idx, "path": str(args.graphs[idx])},
            "gamma": args.gamma,
        }
        _write_json(out_dir / "ensemble.json", payload)
        print(f"representative: graph {idx} ({args.graphs[idx]})")
    return EXIT_OK


def _tolerance_for(name: str, tolerances: dict) -> tuple[str, float]:
    spec = tolerances.get(name, tolerances.get("default", {"rel": 0.05}))
    if isinstance(spec, (int, float)):
        return "abs", float(spec)
    if "abs" in spec:
        return "abs", float(spec["abs"])
    return "rel", float(spec["rel"])


def cmd_compare(args) -> int:
    with open(args.report_a, encoding="utf-8") as fh:
        rep_a = json.load(fh)
    with open(args.report_b, encoding="utf-8") as fh:
        rep_b = json.load(fh)
    tolerances = json.loads(args.tolerances) if args.tolerances else {}
    fields = [f for f in rep_a
              if isinstance(rep_a.get(f), (int, float)) or rep_a.get(f) is None]
    fields = [f for f in fields if not f.endswith("histogram")]
    failures = 0
    print(f"{'metric':<28}{'A':>14}{'B':>14}{'diff':>12}{'tol':>14}  result")
    for name in fields:
        if name not in rep_b:
            print(f"missing metric in B: {name}", file=sys.stderr)
            return EXIT_VALIDATION
        a, b = rep_a[name], rep_b[name]
        kind, tol = _tolerance_for(name, tolerances)
        if a is None or b is None:
            ok = a is None and b is None
            diff = float("nan")
        else:
            diff = abs(float(a) - float(b))
            limit = tol if kind == "abs" else tol * max(abs(float(a)), 1e-300)
            ok = diff <= limit
        failures += 0 if ok else 1
        shown = f"{tol}" if kind == "abs" else f"{tol:.0%} rel"
        cell_a = "None" if a is None else f"{float(a):.6g}"
        cell_b = "None" if b is None else f"{float(b):.6g}"
        print(f"{name:<28}{cell_a:>14}{cell_b:>14}{diff:>12.4g}{shown:>14}"
              f"  {'pass' if ok else 'FAIL'}")
    return EXIT_OK if failures == 0 else EXIT_VALIDATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="annograph",
        description="Annotated-topology profile extraction, rescaling, "
                    "generation, and evaluation.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", help="edge list -> correlation profile")
    p.add_argument("input")
    p.add_argument("--out-dir", default=".")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("generate", help="profile -> synthetic graph ensemble")
    p.add_argument("profile")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--order", choices=("1k", "2k"), default="2k")
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out-dir", default=".")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("eval", help="graphs -> metric reports")
    p.add_argument("graphs", nargs="+")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sources", default="all",
                   help='"all" or a sample size')
    p.add_argument("--gamma", type=float, default=2.1)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out-dir", default=".")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("compare", help="diff two metric reports")
    p.add_argument("report_a")
    p.add_argument("report_b")
    p.add_argument("--tolerances", default="",
                   help='JSON, e.g. {"avg_degree": 0.1, "max_degree": {"rel": 0.1}}')
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (EmptyGraphError, GraphError, FitError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
