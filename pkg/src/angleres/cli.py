"""Command-line front end: ``layout``, ``solve``, ``metrics`` and ``compare``.

Exit codes: 0 success, 1 runtime failure (I/O, parse, numeric), 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import re
import statistics
import sys
from dataclasses import replace

from .geometry import Point
from .graph import GraphError
from .graph_io import format_drawing, load_graph, parse_drawing
from .layout import SPRING_MODELS, LayoutConfig, layout
from .metrics import compute_metrics
from .mma import DisplacementQuery, GridParams, MMAError, solve
from .render import SvgStyle, comparison_figure, render_svg

log = logging.getLogger("angleres")

# flags whose value may legitimately start with '-' (coordinates, seeds)
_VALUE_FLAGS = {"--p", "--neighbor", "--seed", "--seed-start"}
_NEG_VALUE = re.compile(r"^-[\d.]")


class UsageError(Exception):
    pass


def _join_negative_values(argv: list[str]) -> list[str]:
    """Rewrite ``--neighbor -5,1`` as ``--neighbor=-5,1`` so argparse does not read it as a flag."""
    out: list[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_FLAGS and i + 1 < len(argv) and _NEG_VALUE.match(argv[i + 1]):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def _xy(text: str) -> Point:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected x,y but got {text!r}")
    try:
        x, y = float(parts[0]), float(parts[1])
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected x,y but got {text!r}") from None
    if not (math.isfinite(x) and math.isfinite(y)):
        raise argparse.ArgumentTypeError(f"non-finite coordinate {text!r}")
    return Point(x, y)


def _add_config_flags(ap: argparse.ArgumentParser) -> None:
    g = ap.add_argument_group("layout configuration")
    g.add_argument("--iterations", type=int)
    g.add_argument("--seed", type=int)
    g.add_argument("--angle-radius-start", type=float, help="r at iteration 0 (default 0.25 x edge length)")
    g.add_argument("--angle-radius-decay", type=float)
    g.add_argument("--angle-weight", type=float)
    g.add_argument("--spring-weight", type=float)
    g.add_argument("--default-edge-length", type=float)
    g.add_argument("--spring-model", choices=SPRING_MODELS)
    g.add_argument("--subdivide-edges", type=int)
    g.add_argument("--grid-delta-ratio", type=float, help="grid spacing as a fraction of r (degree >= 4)")
    g.add_argument("--no-spring-cooling", action="store_true")


def _config(args) -> LayoutConfig:
    try:
        cfg = LayoutConfig().with_overrides(
            iterations=args.iterations,
            seed=args.seed,
            angle_radius_start=args.angle_radius_start,
            angle_radius_decay=args.angle_radius_decay,
            angle_weight=args.angle_weight,
            spring_weight=args.spring_weight,
            default_edge_length=args.default_edge_length,
            spring_model=args.spring_model,
            subdivide_edges=args.subdivide_edges,
        )
        if args.grid_delta_ratio is not None:
            cfg = replace(cfg, grid=GridParams(args.grid_delta_ratio))
        if args.no_spring_cooling:
            cfg = replace(cfg, spring_cooling=False)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return cfg


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="angleres", description="Max-min-angle vertex displacement and angle-aware spring layout.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("layout", help="run the embedder on a graph")
    p.add_argument("--graph", required=True, help="edge-list file or built-in name (petersen, cycle:6, ...)")
    p.add_argument("--out", help="SVG path; the drawing and metrics JSON are written next to it")
    p.add_argument("--drawing-out", help="drawing file path (default: <out stem>.pos)")
    p.add_argument("--labels", action="store_true", help="label vertices in the SVG")
    p.add_argument("--format", choices=("text", "json"), default="text")
    _add_config_flags(p)

    s = sub.add_parser("solve", help="solve one displacement instance")
    s.add_argument("--p", required=True, type=_xy, metavar="X,Y")
    s.add_argument("--neighbor", action="append", type=_xy, default=[], metavar="X,Y")
    s.add_argument("--r", required=True, type=float)
    s.add_argument("--grid-delta-ratio", type=float, default=GridParams().delta_ratio)
    s.add_argument("--format", choices=("text", "json"), default="text")

    m = sub.add_parser("metrics", help="quality measures of a stored drawing")
    m.add_argument("--graph", required=True)
    m.add_argument("--drawing", required=True, help="file of 'id x y' lines")
    m.add_argument("--default-edge-length", type=float, default=1.0)
    m.add_argument("--format", choices=("text", "json"), default="text")

    c = sub.add_parser("compare", help="paired seeds with the angle force off and on")
    c.add_argument("--graph", required=True)
    c.add_argument("--seeds", type=int, default=10, help="number of seeds")
    c.add_argument("--seed-start", type=int, default=0)
    c.add_argument("--report-dir", help="write compare.csv, compare.json and compare.png here")
    c.add_argument("--format", choices=("text", "json"), default="text")
    _add_config_flags(c)
    return ap


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def _text_metrics(mt: dict) -> list[str]:
    return [
        f"angular_resolution: {mt['angular_resolution_deg']:.6f} deg",
        f"edge_length_rmse: {mt['edge_length_rmse']:.6g}",
        f"crossings: {mt['crossings']}",
    ] + (["degenerate: true"] if mt["degenerate"] else [])


def cmd_layout(args, out) -> int:
    cfg = _config(args)
    g = load_graph(args.graph)
    res = layout(g, cfg)
    mt = compute_metrics(res.graph, res.drawing, cfg.default_edge_length).as_dict()
    report = {
        "graph": args.graph,
        "seed": cfg.seed,
        "iterations_run": len(res.trace),
        "converged": res.converged,
        "metrics": mt,
    }
    if args.out:
        stem = os.path.splitext(args.out)[0]
        drawing_path = args.drawing_out or stem + ".pos"
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(render_svg(res.graph, res.drawing, SvgStyle(labels=args.labels)))
        with open(drawing_path, "w", encoding="utf-8") as fh:
            fh.write(format_drawing(res.drawing, res.graph.vertices))
        with open(stem + ".metrics.json", "w", encoding="utf-8") as fh:
            fh.write(_dump(report) + "\n")
        report["files"] = {"svg": args.out, "drawing": drawing_path, "metrics": stem + ".metrics.json"}
    if args.format == "json":
        print(_dump(report), file=out)
    else:
        print(f"graph: {args.graph}  seed: {cfg.seed}  iterations: {len(res.trace)}"
              f"{'  (converged)' if res.converged else ''}", file=out)
        for line in _text_metrics(mt):
            print(line, file=out)
        for k, v in report.get("files", {}).items():
            print(f"wrote {k}: {v}", file=out)
    return 0


def cmd_solve(args, out) -> int:
    if not (args.r > 0 and math.isfinite(args.r)):
        raise UsageError("--r must be a positive number")
    try:
        grid = GridParams(args.grid_delta_ratio)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    res = solve(DisplacementQuery(args.p, tuple(args.neighbor), args.r), grid)
    if args.format == "json":
        print(_dump({
            "p_star": [res.p_star.x, res.p_star.y],
            "min_angle_rad": res.min_angle,
            "min_angle_deg": math.degrees(res.min_angle),
            "method": res.method.value,
            "degenerate": res.degenerate,
        }), file=out)
    else:
        print(f"P* = ({res.p_star.x:.12g}, {res.p_star.y:.12g})", file=out)
        print(f"min angle = {math.degrees(res.min_angle):.9g} deg ({res.min_angle:.12g} rad)", file=out)
        print(f"method = {res.method.value}" + ("  (degenerate)" if res.degenerate else ""), file=out)
    return 0


def cmd_metrics(args, out) -> int:
    g = load_graph(args.graph)
    with open(args.drawing, encoding="utf-8") as fh:
        d = parse_drawing(fh.read())
    mt = compute_metrics(g, d, args.default_edge_length).as_dict()
    if args.format == "json":
        print(_dump(mt), file=out)
    else:
        for line in _text_metrics(mt):
            print(line, file=out)
    return 0


_COLUMNS = ("seed", "off_deg", "on_deg", "off_rmse", "on_rmse", "off_crossings", "on_crossings")


def run_compare(graph_spec: str, cfg: LayoutConfig, seeds) -> list[dict]:
    g = load_graph(graph_spec)
    rows = []
    for seed in seeds:
        row = {"seed": seed}
        for tag, w in (("off", 0.0), ("on", cfg.angle_weight)):
            c = replace(cfg, seed=seed, angle_weight=w)
            res = layout(g, c)
            mt = compute_metrics(res.graph, res.drawing, c.default_edge_length)
            row[f"{tag}_deg"] = math.degrees(mt.angular_resolution)
            row[f"{tag}_rmse"] = mt.edge_length_rmse
            row[f"{tag}_crossings"] = mt.crossings
        rows.append(row)
    return rows


def _medians(rows) -> dict:
    return {k: statistics.median(r[k] for r in rows) for k in _COLUMNS[1:]} if rows else {}


def _csv(rows, medians) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(_COLUMNS)
    for r in rows:
        w.writerow([r["seed"]] + [f"{r[k]:.6f}" if isinstance(r[k], float) else r[k] for k in _COLUMNS[1:]])
    if medians:
        w.writerow(["median"] + [f"{medians[k]:.6f}" for k in _COLUMNS[1:]])
    return buf.getvalue()


def cmd_compare(args, out) -> int:
    if args.seeds < 1:
        raise UsageError("--seeds must be at least 1")
    cfg = _config(args)
    if cfg.angle_weight == 0:
        raise UsageError("compare needs a positive --angle-weight for the 'on' runs")
    seeds = range(args.seed_start, args.seed_start + args.seeds)
    rows = run_compare(args.graph, cfg, seeds)
    med = _medians(rows)
    report = {"graph": args.graph, "rows": rows, "median": med}
    if args.report_dir:
        os.makedirs(args.report_dir, exist_ok=True)
        with open(os.path.join(args.report_dir, "compare.csv"), "w", encoding="utf-8") as fh:
            fh.write(_csv(rows, med))
        with open(os.path.join(args.report_dir, "compare.json"), "w", encoding="utf-8") as fh:
            fh.write(_dump(report) + "\n")
        comparison_figure(rows, os.path.join(args.report_dir, "compare.png"), title=args.graph)
    if args.format == "json":
        print(_dump(report), file=out)
    else:
        out.write(_csv(rows, med))
        verdict = "on >= off" if med["on_deg"] >= med["off_deg"] else "on < off"
        print(f"# median angular resolution: off {med['off_deg']:.3f} deg, on {med['on_deg']:.3f} deg ({verdict})", file=out)
    return 0


_COMMANDS = {"layout": cmd_layout, "solve": cmd_solve, "metrics": cmd_metrics, "compare": cmd_compare}


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    argv = _join_negative_values(list(sys.argv[1:] if argv is None else argv))
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return _COMMANDS[args.command](args, out)
    except UsageError as exc:
        ap.print_usage(sys.stderr)
        print(f"angleres {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except (GraphError, MMAError, OSError, ValueError, ArithmeticError) as exc:
        print(f"angleres {args.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
