from __future__ import annotations

import csv
from pathlib import Path

import pytest

from busnet import Feed, Route, Stop

# Worked micro-networks used throughout the suite. The three-route feed
# produces the bipartite/stop/route triple with known counts; the
# five-route feed exercises shared-stop thresholds.
THREE_ROUTE_FEED = {
    "A": ["1", "2", "3", "4", "5"],
    "B": ["2", "3", "5", "6", "7", "8"],
    "C": ["3", "4", "5", "8", "9", "10"],
}
FIVE_ROUTE_FEED = {
    "A": ["1", "2", "3", "4", "5"],
    "B": ["2", "4", "6", "8"],
    "C": ["2", "6", "7"],
    "D": ["2", "3", "4"],
    "E": ["1", "4", "6", "7"],
}


def make_feed(label: str, route_defs: dict[str, list[str]], extra_stops: list[str] = ()) -> Feed:
    stops: dict[str, Stop] = {}
    for served in route_defs.values():
        for stop_id in served:
            if stop_id not in stops:
                i = int(stop_id) if stop_id.isdigit() else len(stops)
                stops[stop_id] = Stop(
                    id=stop_id, name=f"stop {stop_id}", lat=-22.9 + i * 0.001, lon=-43.2 - i * 0.001
                )
    for stop_id in extra_stops:
        stops[stop_id] = Stop(id=stop_id, name=f"stop {stop_id}", lat=-22.9, lon=-43.2)
    routes = {
        route_id: Route(id=route_id, name=f"line {route_id}", served_stops=frozenset(served))
        for route_id, served in route_defs.items()
    }
    return Feed(label=label, stops=stops, routes=routes)


@pytest.fixture
def fig1_feed() -> Feed:
    return make_feed("2014-03-05", THREE_ROUTE_FEED)


@pytest.fixture
def fig3_feed() -> Feed:
    return make_feed("example", FIVE_ROUTE_FEED)


def write_gtfs(
    directory: Path,
    route_defs: dict[str, list[str]],
    *,
    trips_per_route: dict[str, list[list[str]]] | None = None,
    extra_stop_rows: list[tuple[str, str, str, str]] = (),
    extra_stop_times: list[tuple[str, str]] = (),
) -> Path:
    """Write a minimal four-file GTFS subset for the given route sets.

    By default each route becomes a single trip covering its stop list;
    ``trips_per_route`` overrides that with explicit per-trip stop lists.
    """
    directory.mkdir(parents=True, exist_ok=True)
    stop_ids = sorted({s for served in route_defs.values() for s in served})

    def rows(name: str, header: list[str], data: list) -> None:
        with (directory / name).open("w", encoding="utf-8", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(header)
            writer.writerows(data)

    stop_rows = [
        (s, f"stop {s}", f"{-22.9 + i * 0.001:.6f}", f"{-43.2 - i * 0.001:.6f}")
        for i, s in enumerate(stop_ids)
    ]
    stop_rows.extend(extra_stop_rows)
    rows("stops.txt", ["stop_id", "stop_name", "stop_lat", "stop_lon"], stop_rows)
    rows(
        "routes.txt",
        ["route_id", "route_short_name"],
        [(route_id, f"line {route_id}") for route_id in route_defs],
    )
    trips = []
    stop_times = []
    for route_id, served in route_defs.items():
        trip_lists = (
            trips_per_route.get(route_id, [served]) if trips_per_route else [served]
        )
        for t, stop_list in enumerate(trip_lists):
            trip_id = f"{route_id}-t{t}"
            trips.append((route_id, trip_id))
            stop_times.extend((trip_id, stop_id) for stop_id in stop_list)
    stop_times.extend(extra_stop_times)
    rows("trips.txt", ["route_id", "trip_id"], trips)
    rows("stop_times.txt", ["trip_id", "stop_id"], stop_times)
    return directory
