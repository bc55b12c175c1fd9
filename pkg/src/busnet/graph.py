"""Graph containers shared by every space construction and metric.

Edges are held as a canonical ``(m, 2)`` index array (each row ``u < v``
in node-index order, rows lexicographically sorted) so constructions can
stay vectorized and the sparse adjacency used by the metric kernels is
one reshape away. Label-level views are materialized on demand for
inspection and tests.
"""

from __future__ import annotations

from typing import Iterable, Mapping

import numpy as np
import scipy.sparse as sp

_EMPTY_EDGES = np.empty((0, 2), dtype=np.int32)


def _canonical_edges(
    edge_idx: np.ndarray, weights: np.ndarray | None, n: int
) -> tuple[np.ndarray, np.ndarray | None]:
    edge_idx = np.asarray(edge_idx, dtype=np.int32).reshape(-1, 2)
    if edge_idx.size == 0:
        return _EMPTY_EDGES, None if weights is None else np.empty(0, dtype=np.int64)
    if edge_idx.min() < 0 or edge_idx.max() >= n:
        raise ValueError("edge endpoint index out of range")
    lo = edge_idx.min(axis=1)
    hi = edge_idx.max(axis=1)
    if (lo == hi).any():
        raise ValueError("self-loops are not allowed")
    canon = np.column_stack([lo, hi])
    order = np.lexsort((canon[:, 1], canon[:, 0]))
    canon = canon[order]
    if len(canon) > 1:
        same = (np.diff(canon[:, 0]) == 0) & (np.diff(canon[:, 1]) == 0)
        if same.any():
            raise ValueError("duplicate edge for an unordered node pair")
    if weights is None:
        return canon, None
    weights = np.asarray(weights, dtype=np.int64).reshape(-1)
    if weights.shape[0] != canon.shape[0]:
        raise ValueError("weights length must match edge count")
    if (weights < 1).any():
        raise ValueError("edge weights must be >= 1")
    return canon, weights[order]


class Graph:
    """Undirected simple graph over opaque string labels.

    Optionally weighted with positive integers (the shared-stop counts
    of the route-overlap space); an absent weight map means weight 1
    everywhere, and equality compares those effective weights so that a
    write/read cycle through an interchange format cannot change a
    graph's identity.
    """

    __slots__ = ("nodes", "_index", "_edge_idx", "_weights", "_adj", "_pair_weights")

    def __init__(
        self,
        nodes: Iterable[str],
        edge_idx: np.ndarray | Iterable[tuple[int, int]] = _EMPTY_EDGES,
        weights: np.ndarray | Iterable[int] | None = None,
    ):
        self.nodes: tuple[str, ...] = tuple(nodes)
        self._index = {label: i for i, label in enumerate(self.nodes)}
        if len(self._index) != len(self.nodes):
            raise ValueError("duplicate node labels")
        if not isinstance(edge_idx, np.ndarray):
            edge_idx = np.array(list(edge_idx), dtype=np.int32).reshape(-1, 2)
        self._edge_idx, self._weights = _canonical_edges(edge_idx, weights, len(self.nodes))
        self._adj = None
        self._pair_weights = None

    @classmethod
    def from_edges(
        cls,
        nodes: Iterable[str],
        edges: Iterable[tuple[str, str]],
        weights: Mapping[tuple[str, str], int] | None = None,
    ) -> "Graph":
        """Build from label pairs; ``weights`` may use either pair orientation."""
        nodes = tuple(nodes)
        index = {label: i for i, label in enumerate(nodes)}
        if len(index) != len(nodes):
            raise ValueError("duplicate node labels")
        pairs = list(edges)
        idx = np.empty((len(pairs), 2), dtype=np.int32)
        for row, (u, v) in enumerate(pairs):
            try:
                idx[row, 0] = index[u]
                idx[row, 1] = index[v]
            except KeyError as exc:
                raise ValueError(f"edge endpoint {exc} is not a listed node") from None
        weight_arr = None
        if weights is not None:
            weight_arr = np.array(
                [weights.get((u, v), weights.get((v, u), 1)) for u, v in pairs], dtype=np.int64
            )
        return cls(nodes, idx, weight_arr)

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    @property
    def edge_count(self) -> int:
        return int(self._edge_idx.shape[0])

    @property
    def weighted(self) -> bool:
        return self._weights is not None

    @property
    def edge_index(self) -> np.ndarray:
        """Canonical (m, 2) int array of node indices; treat as read-only."""
        return self._edge_idx

    @property
    def weight_array(self) -> np.ndarray:
        """Per-edge weights aligned with :attr:`edge_index` (ones if unweighted)."""
        if self._weights is None:
            return np.ones(self.edge_count, dtype=np.int64)
        return self._weights

    @property
    def edges(self) -> frozenset[tuple[str, str]]:
        """Edge set as label pairs, each pair sorted by label."""
        return frozenset(self.edge_labels())

    def edge_labels(self) -> list[tuple[str, str]]:
        nodes = self.nodes
        out = []
        for u, v in self._edge_idx:
            a, b = nodes[u], nodes[v]
            out.append((a, b) if a <= b else (b, a))
        return out

    def _weight_map(self) -> dict[tuple[str, str], int]:
        if self._pair_weights is None:
            labels = self.edge_labels()
            values = self.weight_array
            self._pair_weights = {pair: int(w) for pair, w in zip(labels, values)}
        return self._pair_weights

    def has_node(self, label: str) -> bool:
        return label in self._index

    def has_edge(self, u: str, v: str) -> bool:
        return ((u, v) if u <= v else (v, u)) in self._weight_map()

    def weight(self, u: str, v: str) -> int:
        """Weight of an existing edge (1 when the graph is unweighted)."""
        key = (u, v) if u <= v else (v, u)
        try:
            return self._weight_map()[key]
        except KeyError:
            raise KeyError(f"no edge between {u!r} and {v!r}") from None

    def degrees(self) -> np.ndarray:
        """Degree per node, aligned with :attr:`nodes`."""
        return np.bincount(self._edge_idx.ravel(), minlength=self.node_count).astype(np.int64)

    def adjacency_csr(self) -> sp.csr_matrix:
        """Symmetric 0/1 adjacency in CSR form (cached)."""
        if self._adj is None:
            n = self.node_count
            e = self._edge_idx
            rows = np.concatenate([e[:, 0], e[:, 1]])
            cols = np.concatenate([e[:, 1], e[:, 0]])
            data = np.ones(rows.shape[0], dtype=np.float64)
            self._adj = sp.csr_matrix((data, (rows, cols)), shape=(n, n))
        return self._adj

    def subgraph(self, labels: Iterable[str]) -> "Graph":
        """Induced subgraph; node order follows this graph's order."""
        keep = set(labels)
        unknown = keep - set(self.nodes)
        if unknown:
            raise ValueError(f"labels not in graph: {sorted(unknown)[:5]}")
        sub_nodes = [label for label in self.nodes if label in keep]
        remap = np.full(self.node_count, -1, dtype=np.int64)
        for new, label in enumerate(sub_nodes):
            remap[self._index[label]] = new
        mask = (remap[self._edge_idx[:, 0]] >= 0) & (remap[self._edge_idx[:, 1]] >= 0)
        sub_edges = remap[self._edge_idx[mask]]
        sub_weights = None if self._weights is None else self._weights[mask]
        return Graph(sub_nodes, sub_edges.astype(np.int32), sub_weights)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return set(self.nodes) == set(other.nodes) and self._weight_map() == other._weight_map()

    def __hash__(self):  # pragma: no cover - graphs are not meant to be dict keys
        return hash((frozenset(self.nodes), frozenset(self._weight_map().items())))

    def __repr__(self) -> str:
        kind = "weighted" if self.weighted else "unweighted"
        return f"Graph({self.node_count} nodes, {self.edge_count} edges, {kind})"


class BipartiteGraph:
    """Two-mode incidence graph: route partition vs stop partition.

    Edges join a route node to a stop node, never two nodes of the same
    partition.
    """

    __slots__ = ("route_nodes", "stop_nodes", "_edge_idx")

    def __init__(
        self,
        route_nodes: Iterable[str],
        stop_nodes: Iterable[str],
        edge_idx: np.ndarray | Iterable[tuple[int, int]] = _EMPTY_EDGES,
    ):
        self.route_nodes: tuple[str, ...] = tuple(route_nodes)
        self.stop_nodes: tuple[str, ...] = tuple(stop_nodes)
        if len(set(self.route_nodes)) != len(self.route_nodes):
            raise ValueError("duplicate route labels")
        if len(set(self.stop_nodes)) != len(self.stop_nodes):
            raise ValueError("duplicate stop labels")
        if not isinstance(edge_idx, np.ndarray):
            edge_idx = np.array(list(edge_idx), dtype=np.int32).reshape(-1, 2)
        edge_idx = np.asarray(edge_idx, dtype=np.int32).reshape(-1, 2)
        if edge_idx.size:
            if edge_idx[:, 0].min() < 0 or edge_idx[:, 0].max() >= len(self.route_nodes):
                raise ValueError("route index out of range")
            if edge_idx[:, 1].min() < 0 or edge_idx[:, 1].max() >= len(self.stop_nodes):
                raise ValueError("stop index out of range")
            order = np.lexsort((edge_idx[:, 1], edge_idx[:, 0]))
            edge_idx = edge_idx[order]
            if len(edge_idx) > 1:
                same = (np.diff(edge_idx[:, 0]) == 0) & (np.diff(edge_idx[:, 1]) == 0)
                if same.any():
                    raise ValueError("duplicate incidence edge")
        else:
            edge_idx = _EMPTY_EDGES
        self._edge_idx = edge_idx

    @classmethod
    def from_edges(
        cls,
        route_nodes: Iterable[str],
        stop_nodes: Iterable[str],
        edges: Iterable[tuple[str, str]],
    ) -> "BipartiteGraph":
        route_nodes = tuple(route_nodes)
        stop_nodes = tuple(stop_nodes)
        r_index = {label: i for i, label in enumerate(route_nodes)}
        s_index = {label: i for i, label in enumerate(stop_nodes)}
        idx = []
        for route, stop in edges:
            if route not in r_index:
                raise ValueError(f"edge names unknown route {route!r}")
            if stop not in s_index:
                raise ValueError(f"edge names unknown stop {stop!r}")
            idx.append((r_index[route], s_index[stop]))
        return cls(route_nodes, stop_nodes, idx)

    @property
    def node_count(self) -> int:
        return len(self.route_nodes) + len(self.stop_nodes)

    @property
    def edge_count(self) -> int:
        return int(self._edge_idx.shape[0])

    @property
    def edge_index(self) -> np.ndarray:
        """(m, 2) array of (route index, stop index) rows; treat as read-only."""
        return self._edge_idx

    @property
    def edges(self) -> frozenset[tuple[str, str]]:
        return frozenset(
            (self.route_nodes[r], self.stop_nodes[s]) for r, s in self._edge_idx
        )

    def route_degrees(self) -> np.ndarray:
        return np.bincount(self._edge_idx[:, 0], minlength=len(self.route_nodes)).astype(np.int64)

    def stop_degrees(self) -> np.ndarray:
        return np.bincount(self._edge_idx[:, 1], minlength=len(self.stop_nodes)).astype(np.int64)

    def as_graph(self) -> Graph:
        """One-mode view of the incidence structure (routes first, then stops).

        Lets path-based metrics run on the two-mode network. Requires
        the two partitions' label sets to be disjoint.
        """
        if set(self.route_nodes) & set(self.stop_nodes):
            raise ValueError("route and stop labels collide; cannot form a one-mode view")
        offset = len(self.route_nodes)
        edges = self._edge_idx.astype(np.int32, copy=True)
        edges[:, 1] += offset
        return Graph(self.route_nodes + self.stop_nodes, edges)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BipartiteGraph):
            return NotImplemented
        return (
            set(self.route_nodes) == set(other.route_nodes)
            and set(self.stop_nodes) == set(other.stop_nodes)
            and self.edges == other.edges
        )

    def __hash__(self):  # pragma: no cover
        return hash((frozenset(self.route_nodes), frozenset(self.stop_nodes), self.edges))

    def __repr__(self) -> str:
        return (
            f"BipartiteGraph({len(self.route_nodes)} routes, "
            f"{len(self.stop_nodes)} stops, {self.edge_count} edges)"
        )
