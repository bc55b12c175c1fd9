"""Command-line surface: ingest / build / metrics / compare / export.

Everything is configured through flags (no config files) so a run can be
reproduced from its invocation line alone. Outputs are deterministic:
identical inputs and flags produce byte-identical files regardless of
the worker count.

Exit codes: 0 success, 2 usage or input error, 3 internal error. Every
failure prints a single ``error: ...`` line on stderr.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from .compare import compare_feeds
from .errors import BusnetError
from .feed import Feed, feed_stats, load_canonical, parse_gtfs, save_canonical
from .geo import export_metric_layer, export_route_intensity
from .graph import BipartiteGraph, Graph
from .metrics import betweenness, closeness, degree_report, distance_report, giant_component
from .pajek import write_pajek_net
from .spaces import build_b_space, build_c_space, build_p_space, threshold_c_space

METRIC_NAMES = ("degree", "components", "distance", "closeness", "betweenness")


def _usage_error(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return 2


def _write_text(path: Path, text: str) -> None:
    path.write_text(text, encoding="utf-8")


def _write_json(path: Path, doc: dict) -> None:
    _write_text(path, json.dumps(doc, ensure_ascii=False, indent=2) + "\n")


def _write_pairs_csv(path: Path, header: tuple[str, str], mapping: dict) -> None:
    with path.open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for key in sorted(mapping):
            writer.writerow([key, repr(mapping[key]) if isinstance(mapping[key], float) else mapping[key]])


def _build_space(feed: Feed, space: str, min_shared: int | None) -> Graph | BipartiteGraph:
    if min_shared is not None and space != "c":
        raise ValueError("--min-shared only applies to the C-space (--space c)")
    if space == "b":
        return build_b_space(feed)
    if space == "p":
        return build_p_space(feed)
    cs = build_c_space(feed)
    if min_shared is not None:
        cs = threshold_c_space(cs, min_shared)
    return cs


def cmd_ingest(args: argparse.Namespace) -> int:
    feed = parse_gtfs(args.gtfs)
    save_canonical(feed, args.out)
    stats = feed_stats(feed)
    print(
        f"routes={stats.route_count} stops={stats.stop_count}"
        f" orphan_stops={stats.orphan_stop_count}"
        f" dropped_routes={stats.dropped_route_count}"
        f" dangling_references={stats.dangling_reference_count}"
    )
    for warning in stats.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    return 0


def cmd_build(args: argparse.Namespace) -> int:
    feed = load_canonical(args.canonical)
    graph = _build_space(feed, args.space, args.min_shared)
    write_pajek_net(graph, args.out)
    print(f"space={args.space} nodes={graph.node_count} edges={graph.edge_count} -> {args.out}")
    return 0


def cmd_metrics(args: argparse.Namespace) -> int:
    feed = load_canonical(args.canonical)
    built = _build_space(feed, args.space, args.min_shared)
    selected = [token.strip() for token in args.metrics.split(",") if token.strip()]
    if not selected:
        return _usage_error("no metrics selected")
    if selected == ["all"]:
        selected = list(METRIC_NAMES)
    unknown = [name for name in selected if name not in METRIC_NAMES]
    if unknown:
        return _usage_error(
            f"unknown metric selector(s): {', '.join(unknown)} (choose from {', '.join(METRIC_NAMES)})"
        )

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    # path-based metrics need a one-mode graph; for the bipartite space that
    # is the incidence structure itself viewed as a plain graph
    graph = built.as_graph() if isinstance(built, BipartiteGraph) else built

    for name in selected:
        if name == "degree":
            report = degree_report(built, bucket_width=args.bucket_width)
            _write_json(out_dir / "degree.json", report.to_json_dict())
            _write_pairs_csv(out_dir / "degree.csv", ("node", "degree"), report.per_node)
            print(f"degree: average={report.average} max={report.max_degree} at {report.max_node}")
        elif name == "components":
            report = giant_component(graph)
            _write_json(out_dir / "components.json", report.to_json_dict())
            _write_pairs_csv(
                out_dir / "components.csv", ("node", "component_id"), report.component_id
            )
            print(
                f"components: count={report.component_count}"
                f" giant_size={len(report.giant_nodes)} giant_fraction={report.giant_fraction}"
            )
        elif name == "distance":
            report = distance_report(graph, workers=args.workers)
            _write_json(out_dir / "distance.json", report.to_json_dict())
            with (out_dir / "distance.csv").open("w", encoding="utf-8", newline="") as handle:
                writer = csv.writer(handle, lineterminator="\n")
                writer.writerow(["distance", "count", "cumulative_fraction"])
                for d in sorted(report.histogram):
                    writer.writerow([d, report.histogram[d], repr(report.cumulative_fraction[d])])
            print(f"distance: average={report.average} diameter={report.diameter}")
        elif name == "closeness":
            values = closeness(graph, workers=args.workers)
            _write_json(out_dir / "closeness.json", {k: values[k] for k in sorted(values)})
            _write_pairs_csv(out_dir / "closeness.csv", ("node", "closeness"), values)
            print(f"closeness: nodes={len(values)} max={max(values.values()) if values else 0.0}")
        elif name == "betweenness":
            values = betweenness(graph, workers=args.workers)
            _write_json(out_dir / "betweenness.json", {k: values[k] for k in sorted(values)})
            _write_pairs_csv(out_dir / "betweenness.csv", ("node", "betweenness"), values)
            print(f"betweenness: nodes={len(values)} max={max(values.values()) if values else 0.0}")
    return 0


def cmd_compare(args: argparse.Namespace) -> int:
    thresholds: list[int] = []
    if args.thresholds:
        for token in args.thresholds.split(","):
            token = token.strip()
            if not token:
                continue
            try:
                thresholds.append(int(token))
            except ValueError:
                return _usage_error(f"bad threshold value: {token!r}")
    feed_a = load_canonical(args.canonical_a)
    feed_b = load_canonical(args.canonical_b)
    report = compare_feeds(feed_a, feed_b, thresholds, workers=args.workers)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    _write_json(out_dir / "comparison.json", report.to_json_dict())
    table = report.to_table()
    _write_text(out_dir / "comparison.txt", table)
    print(table, end="")
    return 0


def _read_metric_csv(path: Path) -> tuple[str, dict[str, float]]:
    if not path.is_file():
        raise BusnetError(f"metric CSV not found: {path}")
    with path.open(encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header is None or len(header) < 2:
            raise BusnetError(f"{path.name}: expected a 'node,<metric>' header")
        metric_name = header[1]
        values: dict[str, float] = {}
        for row in reader:
            if len(row) < 2:
                raise BusnetError(f"{path.name}: short row: {row!r}")
            try:
                values[row[0]] = float(row[1])
            except ValueError:
                raise BusnetError(f"{path.name}: non-numeric value for {row[0]!r}") from None
    return metric_name, values


def cmd_export(args: argparse.Namespace) -> int:
    feed = load_canonical(args.canonical)
    if args.routes is not None:
        route_ids = [token.strip() for token in args.routes.split(",") if token.strip()]
        if not route_ids:
            return _usage_error("empty route list")
        collection = export_route_intensity(feed, route_ids, args.out)
    else:
        metric_name, values = _read_metric_csv(Path(args.metric_csv))
        collection = export_metric_layer(
            feed, values, args.out, threshold=args.threshold, metric_name=metric_name
        )
    print(f"features={len(collection['features'])} -> {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="busnet",
        description="Bus network topology: spaces, thresholds, metrics, snapshot comparison.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_ingest = sub.add_parser("ingest", help="parse a GTFS subset into a canonical snapshot")
    p_ingest.add_argument("--gtfs", required=True, help="directory with the four GTFS files")
    p_ingest.add_argument("--out", required=True, help="canonical snapshot JSON to write")
    p_ingest.set_defaults(func=cmd_ingest)

    p_build = sub.add_parser("build", help="build a space and write it as Pajek NET")
    p_build.add_argument("--canonical", required=True, help="canonical snapshot JSON")
    p_build.add_argument("--space", required=True, choices=("b", "p", "c"))
    p_build.add_argument(
        "--min-shared", type=int, default=None, help="shared-stop threshold (C-space only)"
    )
    p_build.add_argument("--out", required=True, help="NET file to write")
    p_build.set_defaults(func=cmd_build)

    p_metrics = sub.add_parser("metrics", help="compute metrics and write JSON/CSV reports")
    p_metrics.add_argument("--canonical", required=True)
    p_metrics.add_argument("--space", required=True, choices=("b", "p", "c"))
    p_metrics.add_argument("--min-shared", type=int, default=None)
    p_metrics.add_argument(
        "--metrics",
        default="all",
        help="comma list of " + ",".join(METRIC_NAMES) + " (default: all)",
    )
    p_metrics.add_argument("--workers", type=int, default=1)
    p_metrics.add_argument("--bucket-width", type=int, default=50)
    p_metrics.add_argument("--out", required=True, help="output directory")
    p_metrics.set_defaults(func=cmd_metrics)

    p_compare = sub.add_parser("compare", help="diff two snapshots across spaces and metrics")
    p_compare.add_argument("canonical_a", help="first canonical snapshot (the baseline)")
    p_compare.add_argument("canonical_b", help="second canonical snapshot")
    p_compare.add_argument(
        "--thresholds", default="", help="comma list of shared-stop thresholds, e.g. 1,50,100"
    )
    p_compare.add_argument("--workers", type=int, default=1)
    p_compare.add_argument("--out", required=True, help="output directory")
    p_compare.set_defaults(func=cmd_compare)

    p_export = sub.add_parser("export", help="write GeoJSON stop layers")
    p_export.add_argument("--canonical", required=True)
    source = p_export.add_mutually_exclusive_group(required=True)
    source.add_argument("--metric-csv", help="node,value CSV as written by the metrics command")
    source.add_argument("--routes", help="comma list of route ids for an intensity layer")
    p_export.add_argument(
        "--threshold", type=float, default=None, help="emit only stops with value > threshold"
    )
    p_export.add_argument("--out", required=True, help="GeoJSON file to write")
    p_export.set_defaults(func=cmd_export)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else 2
    try:
        return args.func(args)
    except (BusnetError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - defensive
        print(f"error: internal failure: {exc}", file=sys.stderr)
        return 3


def entrypoint() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entrypoint()
