"""B-, P- and C-space constructions plus shared-stop thresholding.

* B-space: bipartite route/stop incidence.
* P-space: stop graph; stops adjacent iff some route serves both, so every
  route's served set induces a clique.
* C-space: route graph; routes adjacent iff they share a stop, weighted by
  the size of the shared-stop intersection. Thresholding at ``n`` keeps
  edges whose weight is at least ``n`` (``n = 1`` is the identity).

All builders exclude orphan stops (stops served by no route), sort node
labels lexicographically, and are pure functions of the feed.
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidThreshold
from .feed import Feed
from .graph import BipartiteGraph, Graph


def _sorted_routes_and_stops(feed: Feed) -> tuple[list[str], list[str]]:
    return sorted(feed.routes), sorted(feed.served_stop_ids())


def build_b_space(feed: Feed) -> BipartiteGraph:
    """Bipartite incidence graph: one edge per (route, served stop)."""
    route_ids, stop_ids = _sorted_routes_and_stops(feed)
    stop_pos = {stop_id: i for i, stop_id in enumerate(stop_ids)}
    rows: list[tuple[int, int]] = []
    for r, route_id in enumerate(route_ids):
        for stop_id in feed.routes[route_id].served_stops:
            rows.append((r, stop_pos[stop_id]))
    return BipartiteGraph(route_ids, stop_ids, rows)


def _clique_pairs(indices: np.ndarray) -> np.ndarray:
    """All unordered index pairs of a sorted index vector."""
    k = indices.shape[0]
    iu, ju = np.triu_indices(k, k=1)
    return np.column_stack([indices[iu], indices[ju]])


def build_p_space(feed: Feed) -> Graph:
    """Stop graph: an edge wherever at least one route serves both stops."""
    _, stop_ids = _sorted_routes_and_stops(feed)
    stop_pos = {stop_id: i for i, stop_id in enumerate(stop_ids)}
    chunks = []
    for route_id in sorted(feed.routes):
        served = feed.routes[route_id].served_stops
        if len(served) < 2:
            continue
        idx = np.sort(np.fromiter((stop_pos[s] for s in served), dtype=np.int32, count=len(served)))
        chunks.append(_clique_pairs(idx))
    if not chunks:
        return Graph(stop_ids)
    pairs = np.unique(np.concatenate(chunks), axis=0)
    return Graph(stop_ids, pairs.astype(np.int32))


def build_c_space(feed: Feed) -> Graph:
    """Route graph weighted by shared-stop counts.

    Uses a stop-to-routes inverted index: each stop contributes one pair
    occurrence per pair of routes serving it, so the multiplicity of a
    route pair across all stops is exactly the intersection size. Only
    co-incident route pairs are ever generated.
    """
    route_ids, _ = _sorted_routes_and_stops(feed)
    stop_routes: dict[str, list[int]] = {}
    for r, route_id in enumerate(route_ids):
        for stop_id in feed.routes[route_id].served_stops:
            stop_routes.setdefault(stop_id, []).append(r)
    chunks = []
    for shared in stop_routes.values():
        if len(shared) < 2:
            continue
        # appended in ascending route order, so already sorted
        chunks.append(_clique_pairs(np.asarray(shared, dtype=np.int32)))
    if not chunks:
        return Graph(route_ids, weights=None)
    pairs, counts = np.unique(np.concatenate(chunks), axis=0, return_counts=True)
    return Graph(route_ids, pairs.astype(np.int32), counts.astype(np.int64))


def threshold_c_space(cs: Graph, n: int) -> Graph:
    """Filter a C-space graph to edges with at least ``n`` shared stops.

    Keeps the full node set and the surviving edges' weights, so
    repeated thresholding composes (the filter at ``max(n1, n2)``).
    """
    if isinstance(n, bool) or not isinstance(n, int):
        raise InvalidThreshold(f"threshold must be an integer >= 1, got {n!r}")
    if n < 1:
        raise InvalidThreshold(f"threshold must be >= 1, got {n}")
    weights = cs.weight_array
    mask = weights >= n
    return Graph(cs.nodes, cs.edge_index[mask], weights[mask])
