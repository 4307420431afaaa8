"""Command-line front end wiring the fusion, routing, and parking pipeline."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .experiments import (
    FusionErrorConfig,
    load_fusion_error_config,
    load_route_scenario_config,
    run_fusion_error_study,
    run_route_scenario_config,
    synthetic_three_day_series,
)
from .fusion import FusionModel, fuse_grid
from .graphio import load_graph
from .ingest import DEFAULT_MAX_RADIUS_M, SampleStore, ingest_report_lines
from .model import DEFAULT_CAR, GeoPoint, RoadGraph, ValidationError
from .parking import ParkingParams, load_spots, ranking_to_csv, select_parking
from .routing import build_weighted_matrix, check_share, shortest_route


def _add_graph_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--nodes", required=True, help="nodes CSV path")
    parser.add_argument("--edges", required=True, help="edges CSV path")


def _add_store_arg(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--store",
        help="report-line log used as the sample store (replayed on startup)",
    )


def _load_graph(args: argparse.Namespace) -> RoadGraph:
    with open(args.nodes, "rb") as nodes, open(args.edges, "rb") as edges:
        return load_graph(nodes, edges)


def _load_store(args: argparse.Namespace, graph: RoadGraph) -> SampleStore:
    store = SampleStore()
    path = getattr(args, "store", None)
    if path and Path(path).exists():
        summary = ingest_report_lines(
            store, graph, Path(path).read_text(encoding="utf-8"), args.radius
        )
        if summary.rejected:
            raise ValidationError(
                f"store log {path} contains {summary.rejected} malformed line(s)"
            )
    return store


def _write_output(args: argparse.Namespace, text: str) -> None:
    if getattr(args, "output", None):
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _cmd_ingest(args: argparse.Namespace) -> int:
    graph = _load_graph(args)
    store = _load_store(args, graph)
    before = store.raw_log()
    text = Path(args.reports).read_text(encoding="utf-8")
    summary = ingest_report_lines(store, graph, text, args.radius)
    if args.store:
        new_lines = store.raw_log()[len(before):]
        with open(args.store, "a", encoding="utf-8") as log:
            log.writelines(new_lines)
    print(
        f"accepted={summary.accepted} superseded={summary.superseded} "
        f"dropped={summary.dropped} rejected={summary.rejected}"
    )
    for rej in summary.rejections:
        print(f"line {rej['line']}: {rej['error']}", file=sys.stderr)
    return 1 if summary.rejected else 0


def _cmd_fuse(args: argparse.Namespace) -> int:
    graph = _load_graph(args)
    store = _load_store(args, graph)
    model = FusionModel.parse(args.model)
    grid = fuse_grid(graph, store.latest(), args.t, model)
    _write_output(args, grid.to_json())
    return 0


def _cmd_route(args: argparse.Namespace) -> int:
    graph = _load_graph(args)
    store = _load_store(args, graph)
    model = FusionModel.parse(args.model)
    grid = fuse_grid(graph, store.latest(), args.t, model)
    matrix = build_weighted_matrix(graph, grid, check_share(args.c))
    route = shortest_route(matrix, args.src, args.dst)
    if route is None:
        print(f"no route from {args.src} to {args.dst}", file=sys.stderr)
        return 1
    _write_output(args, route.to_json())
    return 0


def _cmd_park(args: argparse.Namespace) -> int:
    with open(args.spots, "rb") as stream:
        spots = load_spots(stream)
    target = GeoPoint(args.target_lat, args.target_lon)
    best, ranking = select_parking(spots, target, ParkingParams(b=args.b, k=args.k))
    _write_output(args, ranking_to_csv(ranking))
    print(f"best={best}", file=sys.stderr)
    return 0


def _cmd_fusion_error(args: argparse.Namespace) -> int:
    if args.config:
        cfg = load_fusion_error_config(args.config)
    else:
        cfg = FusionErrorConfig(series=synthetic_three_day_series())
    table = run_fusion_error_study(cfg)
    _write_output(args, table.to_csv())
    return 0


def _cmd_scenario(args: argparse.Namespace) -> int:
    report = run_route_scenario_config(load_route_scenario_config(args.config))
    _write_output(args, report.to_csv())
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    from .server import serve

    graph = _load_graph(args)
    store = _load_store(args, graph)
    serve(
        store,
        graph,
        car=DEFAULT_CAR,
        model=FusionModel.parse(args.model),
        host=args.host,
        port=args.port,
        max_radius_m=args.radius,
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sunroute",
        description="Solar-aware routing: fuse irradiance data, pick routes and parking.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse report lines and update a sample store log")
    p.add_argument("reports", help="file of report lines")
    _add_graph_args(p)
    _add_store_arg(p)
    p.add_argument("--radius", type=float, default=DEFAULT_MAX_RADIUS_M)
    p.set_defaults(func=_cmd_ingest)

    p = sub.add_parser("fuse", help="emit the fused grid JSON for an hour")
    p.add_argument("--t", type=int, required=True, help="current hour timestamp")
    p.add_argument("--model", default="gaussian:100000", help="gaussian:<D> or diurnal")
    _add_graph_args(p)
    _add_store_arg(p)
    p.add_argument("--radius", type=float, default=DEFAULT_MAX_RADIUS_M)
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_fuse)

    p = sub.add_parser("route", help="pick the minimum effective-length route")
    p.add_argument("--src", type=int, required=True)
    p.add_argument("--dst", type=int, required=True)
    p.add_argument("--c", type=float, required=True, help="conversion share in [0, 1)")
    p.add_argument("--t", type=int, default=12, help="current hour timestamp")
    p.add_argument("--model", default="gaussian:100000")
    _add_graph_args(p)
    _add_store_arg(p)
    p.add_argument("--radius", type=float, default=DEFAULT_MAX_RADIUS_M)
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_route)

    p = sub.add_parser("park", help="rank parking spots near a target point")
    p.add_argument("--target-lat", type=float, required=True)
    p.add_argument("--target-lon", type=float, required=True)
    p.add_argument("--b", type=float, default=1.0, help="distance exponent")
    p.add_argument("--k", type=float, default=200.0, help="length offset in meters")
    p.add_argument("--spots", required=True, help="spots CSV path")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_park)

    p = sub.add_parser(
        "fusion-error", help="fusion estimation error vs measurement age (CSV)"
    )
    p.add_argument("--config", help="INI config; built-in synthetic series when omitted")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_fusion_error)

    p = sub.add_parser("scenario", help="route shift across conversion shares (CSV)")
    p.add_argument("--config", required=True, help="INI config with [route-shift]")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_scenario)

    p = sub.add_parser("serve", help="run the grid/matrix HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--model", default="gaussian:100000")
    _add_graph_args(p)
    _add_store_arg(p)
    p.add_argument("--radius", type=float, default=DEFAULT_MAX_RADIUS_M)
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValidationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
