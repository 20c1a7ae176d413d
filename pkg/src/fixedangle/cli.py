"""Command-line front end.

Subcommands::

    fixedangle tree-opt -d 3 -p 2 --strategy interp --out registry.json
    fixedangle evaluate graphs.g6 -p 2 --exact-maxcut --csv out.csv
    fixedangle compare-gw graphs.g6 -p 2 --samples 100 --csv out.csv
    fixedangle verify corpus.g6 -d 3 -p 2 --csv rows.csv --json report.json
    fixedangle guarantees --csv table.csv

Exit codes: 0 success, 1 usage, 2 data error, 3 capacity, 4 conjecture
violation. ``FIXEDANGLE_JOBS`` sets the default ``--jobs``. A ``--config``
JSON file supplies defaults for any long flag (keys use underscores);
flags given on the command line win.
"""

from __future__ import annotations

import argparse
import csv
import datetime as _dt
import json
import os
import sys
from pathlib import Path

from . import __version__
from .angles import FixedAngleEntry, Registry, builtin_table, load_entries, save_entries, verify_conjecture
from .classical import MAXCUT_CAP, goemans_williamson, maxcut_exact, performance_ratio
from .engine import Evaluator
from .errors import CapacityError, DataError, FixedAngleError
from .graphs import read_graphs
from .optimize import OptimizerConfig, optimize_tree_angles
from .statevec import QaoaAngles

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_CAPACITY, EXIT_VIOLATION = 0, 1, 2, 3, 4
JOBS_ENV = "FIXEDANGLE_JOBS"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _positive(kind):
    def check(text):
        try:
            value = kind(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
        if value < 1:
            raise argparse.ArgumentTypeError(f"must be >= 1, got {text}")
        return value
    return check


def _default_jobs() -> int:
    raw = os.environ.get(JOBS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise UsageError(f"{JOBS_ENV} must be an integer, got {raw!r}") from None


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="fixedangle", description="Fixed-angle QAOA for MaxCut on regular graphs.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("--config", type=Path, help="JSON file of flag defaults")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    t = sub.add_parser("tree-opt", help="optimize angles on the tree subgraph")
    t.add_argument("-d", "--degree", type=int, required=True)
    t.add_argument("-p", "--depth", type=_positive(int), required=True)
    t.add_argument("--strategy", choices=("interp", "multistart", "both"), default="interp")
    t.add_argument("--starts", type=_positive(int), default=200)
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--backend", choices=("auto", "statevector", "tensor"), default="auto")
    t.add_argument("--max-iters", type=_positive(int), default=OptimizerConfig.max_iters)
    t.add_argument("--registry", type=Path, help="registry consulted for interpolation seeds")
    t.add_argument("--out", type=Path, help="registry JSON to add the entry to")
    t.add_argument("--date", help="provenance date (default: today)")

    e = sub.add_parser("evaluate", help="expected cut at fixed angles")
    _graph_args(e)
    e.add_argument("--exact-maxcut", action="store_true", help="add C_max and the approximation ratio")
    e.add_argument("--maxcut-cap", type=int, default=MAXCUT_CAP)

    c = sub.add_parser("compare-gw", help="performance ratio against Goemans-Williamson")
    _graph_args(c)
    c.add_argument("--samples", type=int, default=100)
    c.add_argument("--seed", type=int, default=0)

    v = sub.add_parser("verify", help="check the fixed-angle conjecture on an ensemble")
    v.add_argument("ensemble", type=Path)
    v.add_argument("-d", "--degree", type=int, required=True)
    v.add_argument("-p", "--depth", type=_positive(int), required=True)
    v.add_argument("--registry", type=Path)
    v.add_argument("--jobs", type=_positive(int))
    v.add_argument("--maxcut-cap", type=int, default=MAXCUT_CAP)
    v.add_argument("--threshold", choices=("tree", "stored"), default="tree",
                   help="bound: tree value at the fixed angles, or the stored 4-digit guarantee")
    v.add_argument("--csv", type=Path)
    v.add_argument("--json", type=Path)

    s = sub.add_parser("guarantees", help="guarantee versus p series")
    s.add_argument("--registry", type=Path)
    s.add_argument("--csv", type=Path)
    return ap


def _graph_args(ap: argparse.ArgumentParser) -> None:
    ap.add_argument("graphs", type=Path, help="graph6 or edge-list file")
    ap.add_argument("-p", "--depth", type=_positive(int), required=True)
    ap.add_argument("-d", "--degree", type=int, default=3, help="degree used to look up table angles")
    ap.add_argument("--angles", default="table", help="'table', 'zero', or gamma,...;beta,...")
    ap.add_argument("--registry", type=Path)
    ap.add_argument("--backend", choices=("auto", "statevector", "tensor"), default="auto")
    ap.add_argument("--jobs", type=_positive(int))
    ap.add_argument("--csv", type=Path)
    ap.add_argument("--json", type=Path)


def _apply_config(ap: argparse.ArgumentParser, argv: list[str]) -> argparse.Namespace:
    args = ap.parse_args(argv)
    if args.config is None:
        return args
    try:
        conf = json.loads(args.config.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise DataError(f"cannot read config {args.config}: {exc}") from None
    if not isinstance(conf, dict):
        raise DataError("config file must hold a JSON object")
    given = {a.split("=", 1)[0].lstrip("-").replace("-", "_") for a in argv if a.startswith("--")}
    for key, value in conf.items():
        if not hasattr(args, key):
            raise DataError(f"config key {key!r} is not a flag of {args.command}")
        if key not in given:
            setattr(args, key, value)
    return args


def _registry(path: Path | None) -> Registry | None:
    return load_entries(path) if path else None


def _resolve_angles(args) -> QaoaAngles:
    p = args.depth
    if args.angles == "table":
        return builtin_table(args.degree, p, _registry(args.registry)).angles
    if args.angles == "zero":
        return QaoaAngles.zeros(p)
    try:
        gamma, beta = (tuple(float(x) for x in part.split(",")) for part in args.angles.split(";"))
    except ValueError:
        raise DataError(f"cannot parse angles {args.angles!r}; expected 'g1,g2;b1,b2'") from None
    angles = QaoaAngles(gamma, beta)
    if angles.p != p:
        raise DataError(f"--angles has {angles.p} layers but -p is {p}")
    return angles


def _jobs(args) -> int:
    return args.jobs if getattr(args, "jobs", None) else _default_jobs()


def _fmt(x) -> str:
    return "" if x is None else repr(x) if isinstance(x, float) else str(x)


def _write_rows(path: Path | None, header: list[str], rows: list[list]) -> None:
    if path is None:
        return
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([_fmt(x) for x in r])


def _write_json(path: Path | None, payload) -> None:
    if path is not None:
        path.write_text(json.dumps(payload, indent=2) + "\n")


def cmd_tree_opt(args) -> int:
    date = args.date or os.environ.get("FIXEDANGLE_DATE") or _dt.date.today().isoformat()
    cfg = OptimizerConfig(max_iters=args.max_iters)
    entry = optimize_tree_angles(
        args.degree, args.depth, args.strategy, cfg, seed=args.seed, n_starts=args.starts,
        registry=_registry(args.registry), backend=args.backend, date=date,
    )
    print(f"d={entry.degree} p={entry.p} guarantee={entry.guarantee:.6f}")
    print("gamma = " + " ".join(f"{x:.6f}" for x in entry.angles.gamma))
    print("beta  = " + " ".join(f"{x:.6f}" for x in entry.angles.beta))
    if args.out:
        reg = load_entries(args.out) if args.out.exists() else Registry()
        reg.add(entry, replace=True)
        save_entries(args.out, reg)
    return EXIT_OK


def cmd_evaluate(args) -> int:
    angles = _resolve_angles(args)
    graphs = read_graphs(args.graphs)
    ev = Evaluator(backend=args.backend, jobs=_jobs(args))
    header = ["graph_id", "N", "M", "F_p", "cut_fraction", "C_max", "C_p", "classes", "error"]
    rows, records, worst = [], [], EXIT_OK
    for gid, g in graphs:
        cmax = err = None
        try:
            if args.exact_maxcut and g.num_vertices <= args.maxcut_cap:
                cmax = maxcut_exact(g, cap=args.maxcut_cap).value
            rep = ev.evaluate(g, angles, cmax)
        except CapacityError as exc:
            err, worst = str(exc), EXIT_CAPACITY
            rows.append([gid, g.num_vertices, g.num_edges, None, None, cmax, None, None, err])
            records.append({"graph_id": gid, "error": err})
            print(f"{gid}: {err}", file=sys.stderr)
            continue
        rows.append([gid, g.num_vertices, g.num_edges, rep.total_expectation, rep.cut_fraction,
                     cmax, rep.approximation_ratio, rep.subgraph_classes, None])
        records.append({
            "graph_id": gid, "N": g.num_vertices, "M": g.num_edges,
            "F_p": rep.total_expectation, "cut_fraction": rep.cut_fraction,
            "C_max": cmax, "C_p": rep.approximation_ratio,
            "classes": rep.subgraph_classes, "per_edge": list(rep.per_edge),
        })
        ratio = "" if rep.approximation_ratio is None else f" C_p={rep.approximation_ratio:.6f}"
        print(f"{gid}: N={g.num_vertices} F_p={rep.total_expectation:.6f} cut_fraction={rep.cut_fraction:.6f}{ratio}")
    _write_rows(args.csv, header, rows)
    _write_json(args.json, {"p": args.depth, "angles": angles.digest(), "graphs": records})
    return worst


def cmd_compare_gw(args) -> int:
    if args.samples < 1:
        raise UsageError(f"--samples must be >= 1, got {args.samples}")
    angles = _resolve_angles(args)
    ev = Evaluator(backend=args.backend, jobs=_jobs(args))
    header = ["graph_id", "N", "F_p", "gw_relaxation", "gw_average", "gw_stderr", "B_p", "advantage"]
    rows, ratios = [], []
    for k, (gid, g) in enumerate(read_graphs(args.graphs)):
        rep = ev.evaluate(g, angles)
        gw = goemans_williamson(g, n_samples=args.samples, seed=args.seed + 1000 * k)
        b = performance_ratio(rep.total_expectation, gw.average_cut)
        ratios.append(b)
        rows.append([gid, g.num_vertices, rep.total_expectation, gw.relaxation_value, gw.average_cut,
                     gw.sample_stderr(), b, b > 1])
        print(f"{gid}: F_p={rep.total_expectation:.6f} GW={gw.average_cut:.3f} B_p={b:.6f}" + (" advantage" if b > 1 else ""))
    summary = {"mean": sum(ratios) / len(ratios), "min": min(ratios), "max": max(ratios),
               "advantage": [r[0] for r in rows if r[-1]]}
    print(f"B_p mean {summary['mean']:.6f} min {summary['min']:.6f} max {summary['max']:.6f}")
    _write_rows(args.csv, header, rows)
    _write_json(args.json, {"p": args.depth, "samples": args.samples, "seed": args.seed, "summary": summary,
                            "graphs": [dict(zip(header, r)) for r in rows]})
    return EXIT_OK


def cmd_verify(args) -> int:
    reg = _registry(args.registry)
    entry: FixedAngleEntry = builtin_table(args.degree, args.depth, reg)
    graphs = read_graphs(args.ensemble)
    report = verify_conjecture(
        graphs, args.degree, args.depth, entry, ensemble_id=args.ensemble.name,
        evaluator=Evaluator(jobs=_jobs(args)), maxcut_cap=args.maxcut_cap, threshold=args.threshold,
    )
    print(report.summary())
    if report.argmin:
        print(f"minimum at {report.argmin}")
    for gid in report.violations:
        print(f"violation: {gid}", file=sys.stderr)
    if args.csv:
        report.write_csv(args.csv)
    if args.json:
        report.write_json(args.json)
    return EXIT_OK if report.ok else EXIT_VIOLATION


def cmd_guarantees(args) -> int:
    reg = Registry.builtin()
    extra = _registry(args.registry)
    for key in extra or ():
        reg.add(extra[key], replace=True)
    rows = [[d, p, reg[(d, p)].guarantee] for d, p in reg]
    for d, p, g in rows:
        print(f"{d},{p},{g}")
    _write_rows(args.csv, ["degree", "p", "guarantee"], rows)
    return EXIT_OK


COMMANDS = {
    "tree-opt": cmd_tree_opt,
    "evaluate": cmd_evaluate,
    "compare-gw": cmd_compare_gw,
    "verify": cmd_verify,
    "guarantees": cmd_guarantees,
}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    ap = build_parser()
    try:
        args = _apply_config(ap, argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"fixedangle: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapacityError as exc:
        print(f"fixedangle: capacity error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (FixedAngleError, OSError) as exc:
        print(f"fixedangle: error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
