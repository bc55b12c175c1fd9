"""GeoJSON point-layer exporters for plotting metric values on a map.

Feeds store latitude/longitude; GeoJSON wants [lon, lat], so the swap
happens here. Styling (color ramps etc.) is left to downstream tools:
layers carry raw numbers only.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, Mapping

from .errors import UnknownRoute, UnknownStop
from .feed import Feed, Stop


def _point_feature(stop: Stop, properties: dict) -> dict:
    return {
        "type": "Feature",
        "geometry": {"type": "Point", "coordinates": [stop.lon, stop.lat]},
        "properties": properties,
    }


def _write(collection: dict, file: str | Path) -> None:
    text = json.dumps(collection, ensure_ascii=False, indent=2, sort_keys=True) + "\n"
    Path(file).write_text(text, encoding="utf-8")


def export_metric_layer(
    feed: Feed,
    values: Mapping[str, float],
    file: str | Path,
    *,
    threshold: float | None = None,
    metric_name: str = "value",
) -> dict:
    """Write stops annotated with a metric as a GeoJSON FeatureCollection.

    With ``threshold`` set, only stops whose value is strictly greater
    are emitted (an empty collection is still a valid file). Features
    are sorted by stop id. Raises :class:`UnknownStop` if a value key is
    not a stop of the feed.
    """
    for stop_id in values:
        if stop_id not in feed.stops:
            raise UnknownStop(f"metric value refers to unknown stop '{stop_id}'")
    features = []
    for stop_id in sorted(values):
        value = values[stop_id]
        if threshold is not None and not value > threshold:
            continue
        stop = feed.stops[stop_id]
        features.append(
            _point_feature(stop, {"stop_id": stop.id, "name": stop.name, metric_name: value})
        )
    collection = {"type": "FeatureCollection", "features": features}
    _write(collection, file)
    return collection


def export_route_intensity(
    feed: Feed,
    selected_routes: Iterable[str],
    file: str | Path,
) -> dict:
    """Write per-stop counts of how many selected routes serve each stop.

    Stops touched by at most one of the selected routes are omitted, so
    the layer shows only where the selection actually bundles. Raises
    :class:`UnknownRoute` for ids absent from the feed.
    """
    selected = sorted(set(selected_routes))
    for route_id in selected:
        if route_id not in feed.routes:
            raise UnknownRoute(f"unknown route '{route_id}'")
    intensity: dict[str, int] = {}
    for route_id in selected:
        for stop_id in feed.routes[route_id].served_stops:
            intensity[stop_id] = intensity.get(stop_id, 0) + 1
    features = []
    for stop_id in sorted(intensity):
        count = intensity[stop_id]
        if count < 2:
            continue
        stop = feed.stops[stop_id]
        features.append(
            _point_feature(stop, {"stop_id": stop.id, "name": stop.name, "intensity": count})
        )
    collection = {"type": "FeatureCollection", "features": features}
    _write(collection, file)
    return collection
