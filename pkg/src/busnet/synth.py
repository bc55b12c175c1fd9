"""Synthetic clustered bus-network generator.

Real city feeds are not redistributable, so scale experiments run on a
stand-in with the same shape: stops grouped into grid cells (the
"neighborhoods"), trunk routes crossing the center, mid-length local
routes wandering between adjacent cells, and short feeders stuck on the
periphery. The mix is tuned so a full-size instance lands near the
magnitudes of a large municipal bus system (hundreds of routes averaging
around a hundred stops, a stop graph of several thousand nodes with a
small diameter).

Everything is driven by one seeded generator, so a given parameter set
always yields the identical feed.
"""

from __future__ import annotations

import numpy as np

from .feed import Feed, ParseDiagnostics, Route, Stop

# Bounding box the unit square is mapped onto (urban-scale, WGS84).
_LAT_RANGE = (-23.05, -22.75)
_LON_RANGE = (-43.75, -43.15)


def _cells_on_segment(a: tuple[int, int], b: tuple[int, int], grid: int) -> list[tuple[int, int]]:
    """Grid cells touched walking the straight segment from a to b."""
    steps = 4 * grid
    cells: list[tuple[int, int]] = []
    for t in np.linspace(0.0, 1.0, steps):
        cell = (int(round(a[0] * (1 - t) + b[0] * t)), int(round(a[1] * (1 - t) + b[1] * t)))
        if not cells or cells[-1] != cell:
            cells.append(cell)
    unique: list[tuple[int, int]] = []
    for cell in cells:
        if cell not in unique:
            unique.append(cell)
    return unique


def synthetic_feed(
    label: str,
    *,
    n_stops: int = 7000,
    n_routes: int = 500,
    stops_per_route: int = 100,
    grid: int = 8,
    seed: int = 0,
    trunk_fraction: float = 0.35,
    feeder_fraction: float = 0.20,
    trunk_size_factor: float = 1.3,
    feeder_size_factor: float = 0.4,
) -> Feed:
    """Generate a deterministic clustered feed.

    ``stops_per_route`` is the target mean served-set size across the
    route mix; trunk and feeder routes are scaled by their factors and
    local routes absorb the remainder so the mean holds.
    """
    if grid < 4:
        raise ValueError("grid must be at least 4")
    rng = np.random.default_rng(seed)
    n_cells = grid * grid

    cell_of_stop = np.arange(n_stops) % n_cells
    cell_stops: list[np.ndarray] = [
        np.flatnonzero(cell_of_stop == cell) for cell in range(n_cells)
    ]
    jitter = rng.random((n_stops, 2))
    xs = (cell_of_stop % grid + jitter[:, 0]) / grid
    ys = (cell_of_stop // grid + jitter[:, 1]) / grid

    stop_width = len(str(n_stops - 1))
    stop_ids = [f"S{i:0{stop_width}d}" for i in range(n_stops)]
    stops = {
        stop_ids[i]: Stop(
            id=stop_ids[i],
            name=f"stop {i}",
            lat=_LAT_RANGE[0] + float(ys[i]) * (_LAT_RANGE[1] - _LAT_RANGE[0]),
            lon=_LON_RANGE[0] + float(xs[i]) * (_LON_RANGE[1] - _LON_RANGE[0]),
        )
        for i in range(n_stops)
    }

    center = (grid - 1) / 2.0
    central_cells = sorted(
        range(n_cells),
        key=lambda c: max(abs(c // grid - center), abs(c % grid - center)),
    )[:4]
    outer_cells = [
        c
        for c in range(n_cells)
        if max(abs(c // grid - center), abs(c % grid - center)) >= center - 1
    ]

    local_fraction = 1.0 - trunk_fraction - feeder_fraction
    if local_fraction <= 0:
        raise ValueError("trunk_fraction + feeder_fraction must leave room for local routes")
    local_size_factor = (
        1.0 - trunk_fraction * trunk_size_factor - feeder_fraction * feeder_size_factor
    ) / local_fraction

    def sample_cell(pool: list[int]) -> int:
        return pool[int(rng.integers(len(pool)))]

    def neighbors(cell: int) -> list[int]:
        row, col = divmod(cell, grid)
        out = []
        for dr, dc in ((-1, 0), (1, 0), (0, -1), (0, 1)):
            r, c = row + dr, col + dc
            if 0 <= r < grid and 0 <= c < grid:
                out.append(r * grid + c)
        return out

    def pick_stops(path: list[int], size: int) -> frozenset[str]:
        quota = max(1, size // len(path))
        chosen: list[int] = []
        for cell in path:
            pool = cell_stops[cell]
            take = min(quota, len(pool))
            chosen.extend(pool[rng.permutation(len(pool))[:take]])
        return frozenset(stop_ids[i] for i in chosen)

    routes: dict[str, Route] = {}
    route_width = len(str(n_routes - 1))
    for r in range(n_routes):
        route_id = f"R{r:0{route_width}d}"
        kind_draw = rng.random()
        if kind_draw < trunk_fraction:
            # corridor through the center between two far-apart cells
            while True:
                start = int(rng.integers(n_cells))
                end = int(rng.integers(n_cells))
                span = max(
                    abs(start // grid - end // grid), abs(start % grid - end % grid)
                )
                if span >= grid - 3:
                    break
            hub = sample_cell(central_cells)
            path = _cells_on_segment(divmod(start, grid), divmod(hub, grid), grid)
            for cell in _cells_on_segment(divmod(hub, grid), divmod(end, grid), grid):
                if cell not in path:
                    path.append(cell)
            cells = [r_ * grid + c_ for r_, c_ in path]
            size_factor = trunk_size_factor
        elif kind_draw < trunk_fraction + feeder_fraction:
            # two adjacent peripheral cells
            start = sample_cell(outer_cells)
            cells = [start, sample_cell(neighbors(start))]
            size_factor = feeder_size_factor
        else:
            # random walk over adjacent cells
            start = int(rng.integers(n_cells))
            cells = [start]
            length = int(rng.integers(4, 8))
            while len(cells) < length:
                step = sample_cell(neighbors(cells[-1]))
                if step not in cells:
                    cells.append(step)
                elif rng.random() < 0.5:
                    break
            size_factor = local_size_factor
        base = stops_per_route * size_factor
        size = max(2, int(round(rng.normal(base, 0.15 * base))))
        routes[route_id] = Route(
            id=route_id, name=f"line {r}", served_stops=pick_stops(cells, size)
        )

    return Feed(label=label, stops=stops, routes=routes, diagnostics=ParseDiagnostics())
