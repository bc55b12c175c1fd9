"""Topological metrics over built graphs.

Distances, closeness and betweenness all ride on a level-synchronous BFS
expressed as sparse-matrix products over fixed-size batches of source
nodes: one product per BFS level advances every source in the batch at
once, which keeps the per-source work in compiled code and makes exact
betweenness on a city-sized stop graph a matter of seconds, not hours.

Batches are a fixed size and partial results are reduced in batch order,
so every reported number (floats included) is bit-identical for any
worker count. Workers beyond 1 fan batches out to worker processes.

All distances are unweighted hop counts; edge weights (shared-stop
counts) never influence path length.
"""

from __future__ import annotations

import multiprocessing as mp
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from .errors import EmptyGraph
from .graph import BipartiteGraph, Graph

BATCH_SIZE = 64

# Worker-process state, installed by the pool initializer (or directly for
# in-process runs).
_WORK: dict = {}


# ---------------------------------------------------------------------------
# report types


@dataclass(frozen=True)
class DegreeReport:
    per_node: dict[str, int]
    average: float
    max_degree: int
    max_node: str
    histogram: dict[str, int]
    route_average: float | None = None
    stop_average: float | None = None
    route_per_node: dict[str, int] | None = None
    stop_per_node: dict[str, int] | None = None

    def to_json_dict(self) -> dict:
        doc: dict = {
            "average": self.average,
            "max_degree": self.max_degree,
            "max_node": self.max_node,
            "histogram": self.histogram,
            "per_node": {k: self.per_node[k] for k in sorted(self.per_node)},
        }
        if self.route_average is not None:
            doc["route_average"] = self.route_average
            doc["stop_average"] = self.stop_average
        return doc


@dataclass(frozen=True)
class ComponentReport:
    component_id: dict[str, int]
    giant_nodes: frozenset[str]
    giant_fraction: float
    component_count: int

    def to_json_dict(self) -> dict:
        return {
            "component_count": self.component_count,
            "giant_size": len(self.giant_nodes),
            "giant_fraction": self.giant_fraction,
            "giant_nodes": sorted(self.giant_nodes),
            "component_id": {k: self.component_id[k] for k in sorted(self.component_id)},
        }


@dataclass(frozen=True)
class DistanceReport:
    histogram: dict[int, int]
    average: float
    diameter: int
    cumulative_fraction: dict[int, float]
    unreachable_pair_count: int
    scope: str = "all"

    def to_json_dict(self) -> dict:
        return {
            "scope": self.scope,
            "average": self.average,
            "diameter": self.diameter,
            "unreachable_pair_count": self.unreachable_pair_count,
            "histogram": {str(d): c for d, c in self.histogram.items()},
            "cumulative_fraction": {str(d): f for d, f in self.cumulative_fraction.items()},
        }


# ---------------------------------------------------------------------------
# degree and components


def _histogram(degrees: np.ndarray, bucket_width: int) -> dict[str, int]:
    counts = np.bincount(degrees // bucket_width)
    return {
        f"{i * bucket_width}-{(i + 1) * bucket_width - 1}": int(c)
        for i, c in enumerate(counts)
    }


def _max_with_smallest_label(labels: Sequence[str], degrees: np.ndarray) -> tuple[int, str]:
    top = int(degrees.max())
    best = min(labels[i] for i in np.flatnonzero(degrees == top))
    return top, best


def degree_report(graph: Graph | BipartiteGraph, bucket_width: int = 50) -> DegreeReport:
    """Per-node degrees, the 2m/n average, and a bucketed distribution.

    Bipartite graphs additionally report the two partition averages
    (incidences per route, incidences per stop).
    """
    if bucket_width < 1:
        raise ValueError("bucket_width must be >= 1")
    if graph.node_count == 0:
        raise EmptyGraph("degree_report on empty graph")
    if isinstance(graph, BipartiteGraph):
        r_deg = graph.route_degrees()
        s_deg = graph.stop_degrees()
        all_deg = np.concatenate([r_deg, s_deg])
        labels = graph.route_nodes + graph.stop_nodes
        route_per_node = {label: int(d) for label, d in zip(graph.route_nodes, r_deg)}
        stop_per_node = {label: int(d) for label, d in zip(graph.stop_nodes, s_deg)}
        per_node = {**route_per_node, **stop_per_node}
        m = graph.edge_count
        max_degree, max_node = _max_with_smallest_label(labels, all_deg)
        return DegreeReport(
            per_node=per_node,
            average=2.0 * m / graph.node_count,
            max_degree=max_degree,
            max_node=max_node,
            histogram=_histogram(all_deg, bucket_width),
            route_average=m / len(graph.route_nodes) if graph.route_nodes else 0.0,
            stop_average=m / len(graph.stop_nodes) if graph.stop_nodes else 0.0,
            route_per_node=route_per_node,
            stop_per_node=stop_per_node,
        )
    degrees = graph.degrees()
    max_degree, max_node = _max_with_smallest_label(graph.nodes, degrees)
    return DegreeReport(
        per_node={label: int(d) for label, d in zip(graph.nodes, degrees)},
        average=2.0 * graph.edge_count / graph.node_count,
        max_degree=max_degree,
        max_node=max_node,
        histogram=_histogram(degrees, bucket_width),
    )


def giant_component(graph: Graph) -> ComponentReport:
    """Connected components with the giant one singled out.

    Ties on size break toward the component containing the
    lexicographically smallest node label. Component ids are numbered by
    first appearance in node order.
    """
    n = graph.node_count
    if n == 0:
        raise EmptyGraph("giant_component on empty graph")
    _, raw = connected_components(graph.adjacency_csr(), directed=False)
    renumber: dict[int, int] = {}
    ids = np.empty(n, dtype=np.int64)
    for i, comp in enumerate(raw):
        comp = int(comp)
        if comp not in renumber:
            renumber[comp] = len(renumber)
        ids[i] = renumber[comp]
    sizes = np.bincount(ids)
    top = int(sizes.max())
    if top == 1:
        giant = frozenset({min(graph.nodes)})
    else:
        best_id = -1
        best_label = None
        for comp in np.flatnonzero(sizes == top):
            label = min(graph.nodes[i] for i in np.flatnonzero(ids == comp))
            if best_label is None or label < best_label:
                best_label = label
                best_id = int(comp)
        giant = frozenset(graph.nodes[i] for i in np.flatnonzero(ids == best_id))
    return ComponentReport(
        component_id={label: int(c) for label, c in zip(graph.nodes, ids)},
        giant_nodes=giant,
        giant_fraction=top / n,
        component_count=int(sizes.shape[0]),
    )


# ---------------------------------------------------------------------------
# batched BFS kernels


def _install_adjacency(indptr: np.ndarray, indices: np.ndarray, n: int) -> None:
    data = np.ones(indices.shape[0], dtype=np.float64)
    _WORK["adj"] = sp.csr_matrix((data, indices, indptr), shape=(n, n))


def _bfs_distances(adj: sp.csr_matrix, sources: np.ndarray) -> np.ndarray:
    """Hop distances from each source (columns); -1 where unreachable."""
    n = adj.shape[0]
    b = sources.shape[0]
    cols = np.arange(b)
    dist = np.full((n, b), -1, dtype=np.int32)
    dist[sources, cols] = 0
    frontier = np.zeros((n, b), dtype=np.float64)
    frontier[sources, cols] = 1.0
    level = 0
    while True:
        hits = adj @ frontier
        new = (hits > 0) & (dist < 0)
        if not new.any():
            return dist
        level += 1
        dist[new] = level
        frontier = new.astype(np.float64)


def _distance_task(sources: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-batch distance summary: level bincount, per-source reach and sum."""
    adj = _WORK["adj"]
    dist = _bfs_distances(adj, np.asarray(sources))
    positive = dist > 0
    counts = np.bincount(dist[positive]).astype(np.int64)
    reach = positive.sum(axis=0).astype(np.int64)
    total = np.where(positive, dist, 0).sum(axis=0, dtype=np.int64)
    return counts, reach, total


def _betweenness_task(sources: np.ndarray) -> np.ndarray:
    """Accumulated geodesic dependencies for one batch of sources.

    Forward sweep: level-synchronous BFS where the sparse product both
    discovers the next level and sums geodesic counts over predecessors.
    Backward sweep: the same product pushes (1 + delta) / sigma from each
    level onto the previous one.
    """
    adj = _WORK["adj"]
    sources = np.asarray(sources)
    n = adj.shape[0]
    b = sources.shape[0]
    cols = np.arange(b)
    dist = np.full((n, b), -1, dtype=np.int32)
    sigma = np.zeros((n, b), dtype=np.float64)
    dist[sources, cols] = 0
    sigma[sources, cols] = 1.0
    current = np.zeros((n, b), dtype=bool)
    current[sources, cols] = True
    frontiers = [current]
    while True:
        flow = adj @ np.where(current, sigma, 0.0)
        new = (flow > 0) & (dist < 0)
        if not new.any():
            break
        dist[new] = len(frontiers)
        sigma[new] = flow[new]
        current = new
        frontiers.append(current)

    delta = np.zeros((n, b), dtype=np.float64)
    safe_sigma = np.where(sigma > 0, sigma, 1.0)
    for level in range(len(frontiers) - 1, 0, -1):
        coef = np.where(frontiers[level], (1.0 + delta) / safe_sigma, 0.0)
        pushed = adj @ coef
        prev = frontiers[level - 1]
        delta[prev] += (sigma * pushed)[prev]
    delta[sources, cols] = 0.0
    return delta.sum(axis=1)


def _source_batches(n: int) -> list[np.ndarray]:
    return [np.arange(start, min(start + BATCH_SIZE, n)) for start in range(0, n, BATCH_SIZE)]


def _map_batches(task: Callable, graph: Graph, workers: int) -> list:
    """Run a per-batch task over all sources; results in batch order.

    The batch decomposition is independent of ``workers``, and results
    are consumed in submission order, so any float accumulation done by
    the caller is schedule-independent.
    """
    batches = _source_batches(graph.node_count)
    adj = graph.adjacency_csr()
    if workers <= 1 or len(batches) <= 1:
        _install_adjacency(adj.indptr, adj.indices, graph.node_count)
        try:
            return [task(batch) for batch in batches]
        finally:
            _WORK.clear()
    methods = mp.get_all_start_methods()
    ctx = mp.get_context("fork" if "fork" in methods else methods[0])
    with ProcessPoolExecutor(
        max_workers=min(workers, len(batches)),
        mp_context=ctx,
        initializer=_install_adjacency,
        initargs=(adj.indptr, adj.indices, graph.node_count),
    ) as pool:
        return list(pool.map(task, batches))


# ---------------------------------------------------------------------------
# distance-based metrics


def distance_report(graph: Graph, scope: str = "all", *, workers: int = 1) -> DistanceReport:
    """Geodesic distance distribution over unordered reachable pairs.

    Unreachable pairs are left out of the histogram and the average and
    surfaced in ``unreachable_pair_count``. ``scope="giant_only"``
    restricts the analysis to the giant component.
    """
    if graph.node_count == 0:
        raise EmptyGraph("distance_report on empty graph")
    if scope not in ("all", "giant_only"):
        raise ValueError(f"scope must be 'all' or 'giant_only', got {scope!r}")
    target = graph
    if scope == "giant_only":
        giant = giant_component(graph).giant_nodes
        target = graph.subgraph(giant)
    n = target.node_count
    results = _map_batches(_distance_task, target, workers)
    max_len = max(len(counts) for counts, _, _ in results)
    ordered_counts = np.zeros(max_len if max_len else 1, dtype=np.int64)
    reachable_ordered = 0
    for counts, reach, _ in results:
        ordered_counts[: len(counts)] += counts
        reachable_ordered += int(reach.sum())
    # every unordered pair was seen once from each endpoint
    histogram = {d: int(c // 2) for d, c in enumerate(ordered_counts) if d >= 1 and c}
    total_pairs = sum(histogram.values())
    weighted = sum(d * c for d, c in histogram.items())
    average = weighted / total_pairs if total_pairs else 0.0
    diameter = max(histogram) if histogram else 0
    cumulative: dict[int, float] = {}
    running = 0
    for d in sorted(histogram):
        running += histogram[d]
        cumulative[d] = running / total_pairs
    unreachable_ordered = n * (n - 1) - reachable_ordered
    return DistanceReport(
        histogram=histogram,
        average=average,
        diameter=diameter,
        cumulative_fraction=cumulative,
        unreachable_pair_count=unreachable_ordered // 2,
        scope=scope,
    )


def closeness(graph: Graph, *, workers: int = 1) -> dict[str, float]:
    """Component-local closeness: (|C| - 1) / sum of distances within C.

    Isolated nodes score 0; a node adjacent to all of its component
    scores exactly 1.
    """
    if graph.node_count == 0:
        raise EmptyGraph("closeness on empty graph")
    results = _map_batches(_distance_task, graph, workers)
    reach = np.concatenate([r for _, r, _ in results])
    total = np.concatenate([t for _, _, t in results])
    values = np.where(reach > 0, reach / np.maximum(total, 1), 0.0)
    return {label: float(v) for label, v in zip(graph.nodes, values)}


def betweenness(graph: Graph, *, workers: int = 1) -> dict[str, float]:
    """Exact betweenness, normalized by (n-1)(n-2)/2 over the whole graph.

    The raw score of v sums, over unordered pairs of other nodes, the
    fraction of their geodesics with v in the interior; pairs in
    different components contribute nothing. Graphs with fewer than
    three nodes score 0 everywhere.
    """
    n = graph.node_count
    if n == 0:
        raise EmptyGraph("betweenness on empty graph")
    if n < 3:
        return {label: 0.0 for label in graph.nodes}
    accumulated = np.zeros(n, dtype=np.float64)
    for partial in _map_batches(_betweenness_task, graph, workers):
        accumulated += partial
    # dependency sweeps see each unordered pair from both endpoints: the /2
    # folds into the normalization divisor (n-1)(n-2)/2
    values = accumulated / ((n - 1.0) * (n - 2.0))
    return {label: float(v) for label, v in zip(graph.nodes, values)}


# ---------------------------------------------------------------------------
# selection


def top_k(
    values: Mapping[str, float | int],
    k: int,
    threshold: float | None = None,
) -> list[tuple[str, float | int]]:
    """Highest-valued nodes, descending, ties broken by ascending label.

    With ``threshold`` set, returns every node whose value is strictly
    greater than it (``k`` is ignored); otherwise the first ``k``.
    """
    ranked = sorted(values.items(), key=lambda item: (-item[1], item[0]))
    if threshold is not None:
        return [(node, value) for node, value in ranked if value > threshold]
    if k < 0:
        raise ValueError("k must be >= 0")
    return ranked[:k]
