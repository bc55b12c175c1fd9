"""Pajek NET reader/writer (undirected, optional two-mode header).

Layout emitted::

    *Vertices N        (two-mode: "*Vertices N P", P = first-partition size)
    1 "label"
    ...
    *Edges
    u v w              (1-based indices, integer weight, 1 if unweighted)

Newlines are LF and the encoding UTF-8. Vertices are written in
lexicographic label order (routes first for two-mode graphs) so equal
graphs serialize identically.
"""

from __future__ import annotations

import re
from pathlib import Path

import numpy as np

from .errors import MalformedNet
from .graph import BipartiteGraph, Graph

_VERTICES_RE = re.compile(r"^\*vertices\s+(\d+)(?:\s+(\d+))?\s*$", re.IGNORECASE)
_VERTEX_RE = re.compile(r'^\s*(\d+)\s+"(.*)"\s*$')
_EDGE_RE = re.compile(r"^\s*(\d+)\s+(\d+)(?:\s+(\S+))?\s*$")


def _check_label(label: str) -> str:
    if '"' in label or "\n" in label or "\r" in label:
        raise ValueError(f"label not representable in NET format: {label!r}")
    return label


def _sorted_permutation(labels: tuple[str, ...]) -> tuple[list[str], np.ndarray]:
    """Labels in lexicographic order plus old-index -> new-index map."""
    order = sorted(range(len(labels)), key=labels.__getitem__)
    perm = np.empty(len(labels), dtype=np.int64)
    for new, old in enumerate(order):
        perm[old] = new
    return [labels[old] for old in order], perm


def write_pajek_net(graph: Graph | BipartiteGraph, file: str | Path) -> None:
    """Write a graph as Pajek NET text; see the module docstring for layout."""
    lines: list[str] = []
    if isinstance(graph, BipartiteGraph):
        routes, r_perm = _sorted_permutation(graph.route_nodes)
        stops, s_perm = _sorted_permutation(graph.stop_nodes)
        p = len(routes)
        lines.append(f"*Vertices {graph.node_count} {p}")
        for i, label in enumerate(routes + stops, start=1):
            lines.append(f'{i} "{_check_label(label)}"')
        lines.append("*Edges")
        e = graph.edge_index
        if e.size:
            u = r_perm[e[:, 0]] + 1
            v = s_perm[e[:, 1]] + 1 + p
            order = np.lexsort((v, u))
            for k in order:
                lines.append(f"{u[k]} {v[k]} 1")
    elif isinstance(graph, Graph):
        labels, perm = _sorted_permutation(graph.nodes)
        lines.append(f"*Vertices {graph.node_count}")
        for i, label in enumerate(labels, start=1):
            lines.append(f'{i} "{_check_label(label)}"')
        lines.append("*Edges")
        e = graph.edge_index
        if e.size:
            w = graph.weight_array
            a = perm[e[:, 0]] + 1
            b = perm[e[:, 1]] + 1
            u = np.minimum(a, b)
            v = np.maximum(a, b)
            order = np.lexsort((v, u))
            for k in order:
                lines.append(f"{u[k]} {v[k]} {w[k]}")
    else:
        raise TypeError(f"cannot write {type(graph).__name__} as NET")
    Path(file).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _significant_lines(text: str) -> list[str]:
    out = []
    for raw in text.split("\n"):
        line = raw.rstrip("\r")
        if line.strip() == "" or line.lstrip().startswith("%"):
            continue
        out.append(line)
    return out


def read_pajek_net(file: str | Path) -> Graph | BipartiteGraph:
    """Parse a NET file written by :func:`write_pajek_net`.

    Returns a weighted :class:`Graph` for one-mode headers and a
    :class:`BipartiteGraph` when the vertex line carries a partition
    size. Raises :class:`MalformedNet` on a bad header, an out-of-range
    vertex index, a non-positive or non-integer weight, self-loops,
    duplicate edges, or same-partition edges in two-mode files.
    """
    lines = _significant_lines(Path(file).read_text(encoding="utf-8"))
    if not lines:
        raise MalformedNet("empty file")
    head = _VERTICES_RE.match(lines[0])
    if head is None:
        raise MalformedNet(f"expected '*Vertices N' header, got: {lines[0]!r}")
    n = int(head.group(1))
    partition = int(head.group(2)) if head.group(2) is not None else None
    if partition is not None and partition > n:
        raise MalformedNet(f"partition size {partition} exceeds vertex count {n}")

    labels: dict[int, str] = {}
    pos = 1
    while pos < len(lines) and not lines[pos].lstrip().startswith("*"):
        match = _VERTEX_RE.match(lines[pos])
        if match is None:
            raise MalformedNet(f"bad vertex line: {lines[pos]!r}")
        index = int(match.group(1))
        if not 1 <= index <= n:
            raise MalformedNet(f"vertex index {index} out of range 1..{n}")
        if index in labels:
            raise MalformedNet(f"duplicate vertex index {index}")
        labels[index] = match.group(2)
        pos += 1
    if len(labels) != n:
        raise MalformedNet(f"expected {n} vertex lines, found {len(labels)}")

    edges: list[tuple[int, int]] = []
    weights: list[int] = []
    if pos < len(lines):
        marker = lines[pos].strip().lower()
        if marker == "*arcs":
            raise MalformedNet("directed '*Arcs' sections are not supported")
        if marker != "*edges":
            raise MalformedNet(f"expected '*Edges' marker, got: {lines[pos]!r}")
        seen: set[tuple[int, int]] = set()
        for line in lines[pos + 1 :]:
            match = _EDGE_RE.match(line)
            if match is None:
                raise MalformedNet(f"bad edge line: {line!r}")
            u, v = int(match.group(1)), int(match.group(2))
            token = match.group(3)
            if token is None:
                w = 1
            else:
                try:
                    w = int(token)
                except ValueError:
                    raise MalformedNet(f"non-integer edge weight: {token!r}") from None
            if not (1 <= u <= n and 1 <= v <= n):
                raise MalformedNet(f"edge endpoint out of range: {u} {v}")
            if u == v:
                raise MalformedNet(f"self-loop on vertex {u}")
            if w < 1:
                raise MalformedNet(f"non-positive edge weight on {u} {v}: {w}")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise MalformedNet(f"duplicate edge {u} {v}")
            seen.add(key)
            edges.append((u, v))
            weights.append(w)

    ordered_labels = [labels[i] for i in range(1, n + 1)]
    if partition is None:
        if len(set(ordered_labels)) != n:
            raise MalformedNet("duplicate vertex labels")
        return Graph.from_edges(
            ordered_labels,
            [(ordered_labels[u - 1], ordered_labels[v - 1]) for u, v in edges],
            {
                (ordered_labels[u - 1], ordered_labels[v - 1]): w
                for (u, v), w in zip(edges, weights)
            },
        )

    route_labels = ordered_labels[:partition]
    stop_labels = ordered_labels[partition:]
    pairs = []
    for u, v in edges:
        if u > partition and v <= partition:
            u, v = v, u
        if not (u <= partition < v):
            raise MalformedNet(f"edge {u} {v} does not cross the partition")
        pairs.append((route_labels[u - 1], stop_labels[v - partition - 1]))
    try:
        return BipartiteGraph.from_edges(route_labels, stop_labels, pairs)
    except ValueError as exc:
        raise MalformedNet(str(exc)) from None
