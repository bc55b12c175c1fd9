"""Paired-snapshot comparison: the before/after redesign analysis.

Builds all three spaces plus any requested shared-stop thresholds for
both snapshots and lines the numbers up as (value_a, value_b, delta,
percent change, direction). Percent change is always computed against
the first snapshot. The plain-text rendering mirrors the usual
up/down/flat arrow table.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .feed import Feed
from .graph import Graph
from .metrics import degree_report, distance_report, giant_component
from .spaces import build_b_space, build_c_space, build_p_space, threshold_c_space

_ARROWS = {"up": "↑", "down": "↓", "flat": "-"}


@dataclass(frozen=True)
class QuantityDelta:
    name: str
    value_a: float | int
    value_b: float | int
    delta: float | int
    percent_change: float | None
    direction: str  # "up" | "down" | "flat"

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "value_a": self.value_a,
            "value_b": self.value_b,
            "delta": self.delta,
            "percent_change": self.percent_change,
            "direction": self.direction,
        }


@dataclass(frozen=True)
class ComparisonReport:
    label_a: str
    label_b: str
    quantities: tuple[QuantityDelta, ...]

    def to_json_dict(self) -> dict:
        return {
            "label_a": self.label_a,
            "label_b": self.label_b,
            "quantities": [q.to_json_dict() for q in self.quantities],
        }

    def to_table(self) -> str:
        """Fixed-column text table with ↑/↓/- direction arrows."""
        rows = [("quantity", self.label_a, self.label_b, "change", "")]
        for q in self.quantities:
            pct = "n/a" if q.percent_change is None else f"{q.percent_change:.2f}%"
            rows.append((q.name, _fmt(q.value_a), _fmt(q.value_b), pct, _ARROWS[q.direction]))
        widths = [max(len(row[i]) for row in rows) for i in range(4)]
        lines = []
        for name, a, b, pct, arrow in rows:
            lines.append(
                f"{name:<{widths[0]}}  {a:>{widths[1]}}  {b:>{widths[2]}}  {pct:>{widths[3]}}  {arrow}".rstrip()
            )
        return "\n".join(lines) + "\n"


def _fmt(value: float | int) -> str:
    if isinstance(value, int):
        return str(value)
    return f"{value:.4f}"


def giant_share(cs: Graph, n: int) -> tuple[int, float]:
    """Giant-component size and node fraction of the C-space filtered at n.

    On an edgeless result every route is its own component, so the share
    degenerates to (1, 1/|routes|) rather than failing.
    """
    report = giant_component(threshold_c_space(cs, n))
    return len(report.giant_nodes), report.giant_fraction


def _snapshot_quantities(
    feed: Feed, thresholds: Sequence[int], workers: int
) -> list[tuple[str, float | int, bool]]:
    """(name, value, is_integer) rows for one snapshot, in report order."""
    b_space = build_b_space(feed)
    p_space = build_p_space(feed)
    c_space = build_c_space(feed)
    b_graph = b_space.as_graph()
    deg_b = degree_report(b_space)
    deg_p = degree_report(p_space)
    giant_b = giant_component(b_graph)
    giant_p = giant_component(p_space)
    dist_b = distance_report(b_graph, workers=workers)
    dist_p = distance_report(p_space, workers=workers)
    rows: list[tuple[str, float | int, bool]] = [
        ("routes", len(feed.routes), True),
        ("stops", len(feed.served_stop_ids()), True),
        ("b_nodes", b_space.node_count, True),
        ("b_edges", b_space.edge_count, True),
        ("p_nodes", p_space.node_count, True),
        ("p_edges", p_space.edge_count, True),
        ("c_nodes", c_space.node_count, True),
        ("c_edges", c_space.edge_count, True),
        ("b_route_avg_degree", deg_b.route_average, False),
        ("b_stop_avg_degree", deg_b.stop_average, False),
        ("p_avg_degree", deg_p.average, False),
        ("b_giant_size", len(giant_b.giant_nodes), True),
        ("b_giant_fraction", giant_b.giant_fraction, False),
        ("p_giant_size", len(giant_p.giant_nodes), True),
        ("p_giant_fraction", giant_p.giant_fraction, False),
        ("b_avg_distance", dist_b.average, False),
        ("b_diameter", dist_b.diameter, True),
        ("p_avg_distance", dist_p.average, False),
        ("p_diameter", dist_p.diameter, True),
    ]
    for n in thresholds:
        size, fraction = giant_share(c_space, n)
        rows.append((f"cs{n}_giant_size", size, True))
        rows.append((f"cs{n}_giant_fraction", fraction, False))
    return rows


def compare_feeds(
    a: Feed,
    b: Feed,
    thresholds: Sequence[int] = (),
    *,
    epsilon: float = 1e-9,
    workers: int = 1,
) -> ComparisonReport:
    """Full metric diff of two snapshots.

    Stop counts use served (non-orphan) stops so they match the space
    node counts. ``epsilon`` is the flatness tolerance for real-valued
    quantities; integer quantities are flat only on exact equality.
    """
    rows_a = _snapshot_quantities(a, thresholds, workers)
    rows_b = _snapshot_quantities(b, thresholds, workers)
    quantities = []
    for (name, value_a, is_int), (_, value_b, _) in zip(rows_a, rows_b):
        delta = value_b - value_a
        if value_a != 0:
            percent = 100.0 * delta / value_a
        else:
            percent = 0.0 if delta == 0 else None
        tolerance = 0 if is_int else epsilon
        if abs(delta) <= tolerance:
            direction = "flat"
        else:
            direction = "up" if delta > 0 else "down"
        quantities.append(
            QuantityDelta(
                name=name,
                value_a=value_a,
                value_b=value_b,
                delta=delta,
                percent_change=percent,
                direction=direction,
            )
        )
    return ComparisonReport(label_a=a.label, label_b=b.label, quantities=tuple(quantities))
