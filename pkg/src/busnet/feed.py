"""Feed model and ingestion.

A snapshot of a bus system is reduced to route -> served-stop incidence:
every downstream graph construction needs only *which* stops a route
serves, never in what order. Parsing therefore merges all trips,
directions and service days of one route_id into a single set of stops.

Two on-disk forms are supported: a four-file GTFS subset (stops.txt,
routes.txt, trips.txt, stop_times.txt) and a single-document canonical
JSON snapshot that round-trips losslessly and serializes byte-identically
for equal feeds.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

from .errors import (
    IntegrityViolation,
    MalformedRow,
    MissingFile,
    SchemaViolation,
)

GTFS_FILES = ("stops.txt", "routes.txt", "trips.txt", "stop_times.txt")

# Cap on per-event warning strings; overflow is summarized in one line so a
# large dirty feed cannot balloon the diagnostics.
_MAX_DETAILED_WARNINGS = 20


@dataclass(frozen=True)
class Stop:
    id: str
    name: str
    lat: float
    lon: float


@dataclass(frozen=True)
class Route:
    id: str
    name: str
    served_stops: frozenset[str]


@dataclass(frozen=True)
class ParseDiagnostics:
    """Parse-time events; not part of a feed's identity."""

    dropped_route_count: int = 0
    dangling_reference_count: int = 0
    warnings: tuple[str, ...] = ()


@dataclass
class Feed:
    """A dated snapshot: stop table plus route -> served-stop incidence.

    Treat instances as immutable once built; all constructions and
    metrics take a Feed read-only.
    """

    label: str
    stops: dict[str, Stop]
    routes: dict[str, Route]
    diagnostics: ParseDiagnostics = field(
        default_factory=ParseDiagnostics, compare=False, repr=False
    )

    def served_stop_ids(self) -> frozenset[str]:
        """Ids of stops served by at least one route."""
        served: set[str] = set()
        for route in self.routes.values():
            served.update(route.served_stops)
        return frozenset(served)

    def orphan_stop_ids(self) -> frozenset[str]:
        """Ids of stops present in the table but served by no route."""
        return frozenset(self.stops) - self.served_stop_ids()


@dataclass(frozen=True)
class FeedStats:
    route_count: int
    stop_count: int
    orphan_stop_count: int
    dropped_route_count: int
    dangling_reference_count: int
    warnings: tuple[str, ...] = ()


def feed_stats(feed: Feed) -> FeedStats:
    """Basic counts for a feed, including ingestion-time tallies."""
    diag = feed.diagnostics
    return FeedStats(
        route_count=len(feed.routes),
        stop_count=len(feed.stops),
        orphan_stop_count=len(feed.orphan_stop_ids()),
        dropped_route_count=diag.dropped_route_count,
        dangling_reference_count=diag.dangling_reference_count,
        warnings=diag.warnings,
    )


def _reader(
    path: Path,
    required: Iterable[str],
    any_of: tuple[str, ...] = (),
) -> Iterator[tuple[int, dict]]:
    """Yield (line_number, row) from a GTFS CSV, checking required columns.

    ``any_of`` names alternative columns of which at least one must be
    present. Tolerates a UTF-8 BOM and CRLF line endings; extra columns
    pass through untouched.
    """
    with path.open(encoding="utf-8-sig", newline="") as handle:
        reader = csv.DictReader(handle)
        header = reader.fieldnames or []
        for column in required:
            if column not in header:
                raise MalformedRow(path.name, 1, f"missing required column '{column}'")
        if any_of and not any(column in header for column in any_of):
            raise MalformedRow(
                path.name, 1, "missing required column " + " or ".join(f"'{c}'" for c in any_of)
            )
        for row in reader:
            yield reader.line_num, row


def _cell(row: dict, column: str) -> str:
    value = row.get(column)
    return value.strip() if isinstance(value, str) else ""


def parse_gtfs(directory: str | Path, label: str | None = None) -> Feed:
    """Parse a four-file GTFS subset into a Feed.

    A route's served set is the union of stop_ids over every stop_times
    row of every trip of that route_id, so splitting a line into several
    trips (directions, service days) never changes the result.

    Rules applied while reading:

    * stops with unparseable or out-of-range coordinates abort the parse
      (``MalformedRow`` pointing at file and line);
    * stop_times rows naming an unknown trip or stop are skipped and
      tallied as dangling references, as are trips naming an unknown
      route;
    * duplicate stop/route/trip ids keep the first definition and warn;
    * routes left with no resolvable stop are dropped and counted.

    Stops never referenced stay in the table and show up as orphans in
    :func:`feed_stats`.
    """
    base = Path(directory)
    for name in GTFS_FILES:
        if not (base / name).is_file():
            raise MissingFile(f"required GTFS file not found: {base / name}")

    warnings: list[str] = []
    suppressed = 0

    def warn(message: str) -> None:
        nonlocal suppressed
        if len(warnings) < _MAX_DETAILED_WARNINGS:
            warnings.append(message)
        else:
            suppressed += 1

    stops: dict[str, Stop] = {}
    for line, row in _reader(base / "stops.txt", ("stop_id", "stop_name", "stop_lat", "stop_lon")):
        stop_id = _cell(row, "stop_id")
        if not stop_id:
            raise MalformedRow("stops.txt", line, "empty stop_id")
        try:
            lat = float(_cell(row, "stop_lat"))
            lon = float(_cell(row, "stop_lon"))
        except ValueError:
            raise MalformedRow("stops.txt", line, "unparseable stop_lat/stop_lon") from None
        if not (-90.0 <= lat <= 90.0 and -180.0 <= lon <= 180.0):
            raise MalformedRow("stops.txt", line, f"coordinates out of range: {lat}, {lon}")
        if stop_id in stops:
            warn(f"stops.txt:{line}: duplicate stop_id '{stop_id}' ignored")
            continue
        stops[stop_id] = Stop(id=stop_id, name=_cell(row, "stop_name"), lat=lat, lon=lon)

    route_names: dict[str, str] = {}
    routes_rows = _reader(
        base / "routes.txt", ("route_id",), any_of=("route_short_name", "route_long_name")
    )
    for line, row in routes_rows:
        route_id = _cell(row, "route_id")
        if not route_id:
            raise MalformedRow("routes.txt", line, "empty route_id")
        if route_id in route_names:
            warn(f"routes.txt:{line}: duplicate route_id '{route_id}' ignored")
            continue
        route_names[route_id] = _cell(row, "route_short_name") or _cell(row, "route_long_name")

    dangling = 0
    trip_route: dict[str, str] = {}
    for line, row in _reader(base / "trips.txt", ("route_id", "trip_id")):
        trip_id = _cell(row, "trip_id")
        route_id = _cell(row, "route_id")
        if not trip_id:
            raise MalformedRow("trips.txt", line, "empty trip_id")
        if route_id not in route_names:
            dangling += 1
            warn(f"trips.txt:{line}: trip '{trip_id}' references unknown route '{route_id}'")
            continue
        if trip_id in trip_route:
            warn(f"trips.txt:{line}: duplicate trip_id '{trip_id}' ignored")
            continue
        trip_route[trip_id] = route_id

    served: dict[str, set[str]] = {route_id: set() for route_id in route_names}
    for line, row in _reader(base / "stop_times.txt", ("trip_id", "stop_id")):
        trip_id = _cell(row, "trip_id")
        stop_id = _cell(row, "stop_id")
        route_id = trip_route.get(trip_id)
        if route_id is None or stop_id not in stops:
            dangling += 1
            continue
        served[route_id].add(stop_id)

    dropped = 0
    routes: dict[str, Route] = {}
    for route_id, name in route_names.items():
        stops_of_route = served[route_id]
        if not stops_of_route:
            dropped += 1
            warn(f"route '{route_id}' dropped: no resolvable stops")
            continue
        routes[route_id] = Route(id=route_id, name=name, served_stops=frozenset(stops_of_route))

    if dangling:
        warnings.append(f"{dangling} dangling reference(s) skipped during ingestion")
    if suppressed:
        warnings.append(f"{suppressed} further warning(s) suppressed")
    if not routes or not stops:
        raise SchemaViolation("snapshot unusable: needs at least one route and one stop")

    return Feed(
        label=label if label is not None else base.name,
        stops=stops,
        routes=routes,
        diagnostics=ParseDiagnostics(
            dropped_route_count=dropped,
            dangling_reference_count=dangling,
            warnings=tuple(warnings),
        ),
    )


def save_canonical(feed: Feed, file: str | Path) -> None:
    """Write the canonical JSON snapshot.

    Arrays are sorted by id and keys lexicographically, so equal feeds
    always produce byte-identical files.
    """
    doc = {
        "label": feed.label,
        "stops": [
            {"id": s.id, "name": s.name, "lat": s.lat, "lon": s.lon}
            for s in (feed.stops[k] for k in sorted(feed.stops))
        ],
        "routes": [
            {"id": r.id, "name": r.name, "stops": sorted(r.served_stops)}
            for r in (feed.routes[k] for k in sorted(feed.routes))
        ],
    }
    text = json.dumps(doc, ensure_ascii=False, indent=2, sort_keys=True) + "\n"
    Path(file).write_text(text, encoding="utf-8")


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise SchemaViolation(message)


def _is_real(value) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def load_canonical(file: str | Path) -> Feed:
    """Load and validate a canonical JSON snapshot.

    Raises SchemaViolation for structural problems (missing fields, wrong
    types, empty stop/route tables, out-of-range coordinates) and
    IntegrityViolation when a route references an unknown stop.
    """
    path = Path(file)
    if not path.is_file():
        raise MissingFile(f"canonical snapshot not found: {path}")
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaViolation(f"not valid JSON: {exc}") from None

    _require(isinstance(doc, dict), "top-level document must be an object")
    label = doc.get("label")
    _require(isinstance(label, str), "'label' must be a string")
    raw_stops = doc.get("stops")
    raw_routes = doc.get("routes")
    _require(isinstance(raw_stops, list) and raw_stops, "'stops' must be a non-empty array")
    _require(isinstance(raw_routes, list) and raw_routes, "'routes' must be a non-empty array")

    stops: dict[str, Stop] = {}
    for entry in raw_stops:
        _require(isinstance(entry, dict), "stop entries must be objects")
        stop_id = entry.get("id")
        name = entry.get("name")
        lat = entry.get("lat")
        lon = entry.get("lon")
        _require(isinstance(stop_id, str) and stop_id != "", "stop 'id' must be a non-empty string")
        _require(isinstance(name, str), f"stop '{stop_id}': 'name' must be a string")
        _require(_is_real(lat) and _is_real(lon), f"stop '{stop_id}': 'lat'/'lon' must be numbers")
        _require(
            -90.0 <= lat <= 90.0 and -180.0 <= lon <= 180.0,
            f"stop '{stop_id}': coordinates out of range",
        )
        _require(stop_id not in stops, f"duplicate stop id '{stop_id}'")
        stops[stop_id] = Stop(id=stop_id, name=name, lat=float(lat), lon=float(lon))

    routes: dict[str, Route] = {}
    for entry in raw_routes:
        _require(isinstance(entry, dict), "route entries must be objects")
        route_id = entry.get("id")
        name = entry.get("name")
        served = entry.get("stops")
        _require(
            isinstance(route_id, str) and route_id != "", "route 'id' must be a non-empty string"
        )
        _require(isinstance(name, str), f"route '{route_id}': 'name' must be a string")
        _require(
            isinstance(served, list) and served, f"route '{route_id}': 'stops' must be non-empty"
        )
        _require(route_id not in routes, f"duplicate route id '{route_id}'")
        for stop_id in served:
            _require(isinstance(stop_id, str), f"route '{route_id}': stop refs must be strings")
            if stop_id not in stops:
                raise IntegrityViolation(f"route '{route_id}' references unknown stop '{stop_id}'")
        routes[route_id] = Route(id=route_id, name=name, served_stops=frozenset(served))

    return Feed(label=label, stops=stops, routes=routes)
