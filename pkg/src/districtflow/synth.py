"""Synthetic grid instances for tests, demos, and benchmarks.

Units are unit squares on a rook-adjacency grid. Flow generators plant
community structure so that biased sampling has something to find; the vote
field leans one way on the left of the grid and the other way on the right,
with an asymmetric ripple to keep district tallies tie-free.
"""

from __future__ import annotations

import math

from .flows import FlowMatrix
from .graph import UnitGraph, UnitNode, build_graph


def unit_id(row: int, col: int) -> str:
    return f"r{row:02d}c{col:02d}"


def grid_nodes(rows: int, cols: int, *, population: int = 100) -> list[UnitNode]:
    vap = int(population * 0.8)
    nodes = []
    for r in range(rows):
        for c in range(cols):
            share = _dem_share(r, c, rows, cols)
            nodes.append(
                UnitNode(
                    id=unit_id(r, c),
                    population=population,
                    voting_age_pop=vap,
                    votes_dem=vap * share,
                    votes_rep=vap * (1.0 - share),
                    area=1.0,
                    perimeter=4.0,
                )
            )
    return nodes


def _dem_share(r: int, c: int, rows: int, cols: int) -> float:
    # Left-leaning-dem gradient plus an irrational ripple so no two district
    # tallies can come out exactly equal.
    base = 0.62 - 0.24 * (c / max(cols - 1, 1))
    ripple = 0.04 * math.sin(1.7 * r + 0.9 * c + 0.3)
    return min(max(base + ripple, 0.05), 0.95)


def grid_edges(rows: int, cols: int) -> list[tuple[str, str, float]]:
    edges = []
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                edges.append((unit_id(r, c), unit_id(r, c + 1), 1.0))
            if r + 1 < rows:
                edges.append((unit_id(r, c), unit_id(r + 1, c), 1.0))
    return edges


def planted_flows(
    rows: int,
    cols: int,
    *,
    within: float = 10.0,
    cross: float = 1.0,
    self_flow: float = 2.0,
) -> FlowMatrix:
    """Adjacent-pair flows with two planted communities split at the middle
    column: within-community pairs move `within` trips each way,
    cross-community pairs only `cross`."""
    half = cols // 2
    entries: dict[tuple[str, str], float] = {}

    def community(c: int) -> int:
        return 0 if c < half else 1

    for r in range(rows):
        for c in range(cols):
            u = unit_id(r, c)
            if self_flow > 0:
                entries[(u, u)] = self_flow
            for rr, cc in ((r, c + 1), (r + 1, c)):
                if rr >= rows or cc >= cols:
                    continue
                v = unit_id(rr, cc)
                value = within if community(c) == community(cc) else cross
                entries[(u, v)] = value
                entries[(v, u)] = value
    return FlowMatrix(entries)


def grid_graph(
    rows: int,
    cols: int,
    *,
    population: int = 100,
    within: float = 10.0,
    cross: float = 1.0,
    self_flow: float = 2.0,
) -> tuple[UnitGraph, FlowMatrix]:
    flows = planted_flows(rows, cols, within=within, cross=cross, self_flow=self_flow)
    graph = build_graph(grid_nodes(rows, cols, population=population),
                        grid_edges(rows, cols), flows)
    return graph, flows


def grid_units_geojson(rows: int, cols: int) -> dict:
    """FeatureCollection of unit squares keyed by unit id, for web export."""
    features = []
    for r in range(rows):
        for c in range(cols):
            x, y = float(c), float(rows - 1 - r)
            ring = [[x, y], [x + 1, y], [x + 1, y + 1], [x, y + 1], [x, y]]
            features.append({
                "type": "Feature",
                "properties": {"id": unit_id(r, c)},
                "geometry": {"type": "Polygon", "coordinates": [ring]},
            })
    return {"type": "FeatureCollection", "features": features}
