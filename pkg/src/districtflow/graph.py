"""Dual graph of geographic units and the district partition over it.

The graph is immutable after build_graph() and shareable across threads.
Partition is a value owned by one chain: methods that change it return a
new Partition, and every cached aggregate equals recomputation from scratch.
"""

from __future__ import annotations

import hashlib
import json
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

from .errors import (
    DisconnectedGraph,
    DuplicateEdge,
    DuplicateNode,
    NotContiguousDistrict,
    UnknownDistrict,
    UnknownEndpoint,
)
from .flows import FlowMatrix

EdgeKey = tuple[str, str]


def edge_key(u: str, v: str) -> EdgeKey:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class UnitNode:
    """One geographic unit: population, vote tallies, and scalar geometry.

    Areas are km^2 and perimeters km; perimeter is the full boundary length
    of the unit polygon, so adjacent units can cancel shared boundary.
    """

    id: str
    population: int
    voting_age_pop: int
    votes_dem: float
    votes_rep: float
    area: float
    perimeter: float

    def __post_init__(self):
        if self.population < 0:
            raise ValueError(f"unit {self.id!r}: negative population")
        if not 0 <= self.voting_age_pop <= self.population:
            raise ValueError(f"unit {self.id!r}: voting_age_pop outside [0, population]")
        if self.votes_dem < 0 or self.votes_rep < 0:
            raise ValueError(f"unit {self.id!r}: negative votes")
        if self.area <= 0 or self.perimeter <= 0:
            raise ValueError(f"unit {self.id!r}: area and perimeter must be positive")


@dataclass(frozen=True)
class UnitEdge:
    """Adjacency between two units, with shared boundary length in km and
    the symmetrized flow weight s(u,v) + s(v,u) in person-trips/month."""

    u: str
    v: str
    shared_perimeter: float
    flow_weight: float

    @property
    def key(self) -> EdgeKey:
        return (self.u, self.v)


class UnitGraph:
    """Immutable dual graph with a sorted adjacency index."""

    __slots__ = ("nodes", "edges", "neighbors", "node_order", "total_population", "_digest")

    def __init__(
        self,
        nodes: dict[str, UnitNode],
        edges: dict[EdgeKey, UnitEdge],
        neighbors: dict[str, tuple[str, ...]],
    ):
        self.nodes = nodes
        self.edges = edges
        self.neighbors = neighbors
        self.node_order: tuple[str, ...] = tuple(sorted(nodes))
        self.total_population: int = sum(n.population for n in nodes.values())
        self._digest: str | None = None

    def edge(self, u: str, v: str) -> UnitEdge:
        return self.edges[edge_key(u, v)]

    def region_edge_keys(self, region: frozenset[str] | set[str]) -> Iterator[EdgeKey]:
        """Edges of the induced subgraph on region, in canonical order."""
        for u in sorted(region):
            for v in self.neighbors[u]:
                if v > u and v in region:
                    yield (u, v)

    def incident_edge_keys(self, region: frozenset[str] | set[str]) -> Iterator[EdgeKey]:
        """Edges with at least one endpoint in region, each yielded once."""
        for u in sorted(region):
            for v in self.neighbors[u]:
                if v in region and v < u:
                    continue
                yield edge_key(u, v)

    def digest(self) -> str:
        """Content hash of nodes and edges, stable across processes."""
        if self._digest is None:
            payload = {
                "nodes": [
                    [n.id, n.population, n.voting_age_pop, n.votes_dem, n.votes_rep,
                     n.area, n.perimeter]
                    for n in (self.nodes[i] for i in self.node_order)
                ],
                "edges": [
                    [e.u, e.v, e.shared_perimeter, e.flow_weight]
                    for _, e in sorted(self.edges.items())
                ],
            }
            raw = json.dumps(payload, separators=(",", ":"), sort_keys=True).encode()
            self._digest = hashlib.sha256(raw).hexdigest()
        return self._digest


def _components(nodes: Iterable[str], neighbors: Mapping[str, tuple[str, ...]]) -> list[set[str]]:
    todo = set(nodes)
    out: list[set[str]] = []
    while todo:
        start = min(todo)
        seen = {start}
        queue = deque([start])
        while queue:
            cur = queue.popleft()
            for nb in neighbors.get(cur, ()):
                if nb in todo and nb not in seen:
                    seen.add(nb)
                    queue.append(nb)
        out.append(seen)
        todo -= seen
    return out


def build_graph(
    nodes: Iterable[UnitNode],
    edges: Iterable[tuple[str, str, float]],
    flows: FlowMatrix,
) -> UnitGraph:
    """Assemble the dual graph, wiring symmetrized flow weights onto edges.

    Edge tuples are (u, v, shared_perimeter). Raises DuplicateNode,
    UnknownEndpoint, DuplicateEdge, or DisconnectedGraph (listing the
    components) when the inputs are inconsistent.
    """
    node_map: dict[str, UnitNode] = {}
    for node in nodes:
        if node.id in node_map:
            raise DuplicateNode(f"duplicate node id {node.id!r}")
        node_map[node.id] = node

    edge_map: dict[EdgeKey, UnitEdge] = {}
    adj: dict[str, set[str]] = {nid: set() for nid in node_map}
    for u, v, shared in edges:
        if u not in node_map or v not in node_map:
            missing = u if u not in node_map else v
            raise UnknownEndpoint(f"edge ({u!r}, {v!r}) references unknown unit {missing!r}")
        if u == v:
            raise ValueError(f"self edge on {u!r}")
        key = edge_key(u, v)
        if key in edge_map:
            raise DuplicateEdge(f"duplicate edge {key}")
        if shared < 0:
            raise ValueError(f"edge {key}: negative shared_perimeter")
        min_perim = min(node_map[u].perimeter, node_map[v].perimeter)
        if shared > min_perim + 1e-9:
            raise ValueError(f"edge {key}: shared_perimeter exceeds a member perimeter")
        weight = flows.get(key[0], key[1]) + flows.get(key[1], key[0])
        edge_map[key] = UnitEdge(key[0], key[1], shared, weight)
        adj[u].add(v)
        adj[v].add(u)

    neighbors = {nid: tuple(sorted(nbs)) for nid, nbs in adj.items()}
    comps = _components(node_map, neighbors)
    if len(comps) != 1:
        raise DisconnectedGraph(comps)
    return UnitGraph(node_map, edge_map, neighbors)


class Partition:
    """Assignment of units to districts 1..k with cached aggregates.

    Caches: per-district population, votes, area, summed node perimeters,
    summed interior shared boundary; the cut-edge set; and the intra/inter
    flow sums. intra + inter always equals the flow matrix total.
    """

    __slots__ = (
        "graph", "k", "assignment", "district_units",
        "population", "votes_dem", "votes_rep", "area",
        "node_perimeter", "interior_shared_perimeter",
        "cut_edges", "intra_flow_sum", "inter_flow_sum",
    )

    def __init__(self, **kw):
        for name in self.__slots__:
            setattr(self, name, kw[name])

    @classmethod
    def from_assignment(
        cls,
        graph: UnitGraph,
        flows: FlowMatrix,
        assignment: Mapping[str, int],
        k: int | None = None,
        check_contiguity: bool = True,
    ) -> "Partition":
        """Build a partition from scratch, validating totality, dense labels,
        nonempty districts, and (unless opted out) contiguity."""
        if set(assignment) != set(graph.nodes):
            extra = set(assignment) - set(graph.nodes)
            missing = set(graph.nodes) - set(assignment)
            raise ValueError(
                f"assignment does not cover the graph exactly "
                f"(extra={sorted(extra)[:5]}, missing={sorted(missing)[:5]})"
            )
        labels = set(assignment.values())
        if k is None:
            k = max(labels)
        if labels != set(range(1, k + 1)):
            raise ValueError(f"district labels must be exactly 1..{k}, got {sorted(labels)}")

        units: list[set[str]] = [set() for _ in range(k)]
        for nid, d in assignment.items():
            units[d - 1].add(nid)

        if check_contiguity:
            for d, members in enumerate(units, start=1):
                comps = _components(members, graph.neighbors)
                if len(comps) != 1:
                    raise NotContiguousDistrict(
                        f"district {d} splits into {len(comps)} components"
                    )

        # accumulate in canonical (sorted) order so a scratch rebuild lands
        # on bitwise-identical floats as the incremental recombine path
        pop = [0] * k
        dem = [0.0] * k
        rep = [0.0] * k
        area = [0.0] * k
        perim = [0.0] * k
        for nid in graph.node_order:
            d = assignment[nid]
            node = graph.nodes[nid]
            pop[d - 1] += node.population
            dem[d - 1] += node.votes_dem
            rep[d - 1] += node.votes_rep
            area[d - 1] += node.area
            perim[d - 1] += node.perimeter

        shared = [0.0] * k
        cut: set[EdgeKey] = set()
        for key in sorted(graph.edges):
            e = graph.edges[key]
            du, dv = assignment[e.u], assignment[e.v]
            if du == dv:
                shared[du - 1] += e.shared_perimeter
            else:
                cut.add(key)

        intra = 0.0
        inter = 0.0
        for (o, d), f in flows.entries.items():
            if assignment[o] == assignment[d]:
                intra += f
            else:
                inter += f

        return cls(
            graph=graph, k=k, assignment=dict(assignment),
            district_units=tuple(frozenset(u) for u in units),
            population=tuple(pop), votes_dem=tuple(dem), votes_rep=tuple(rep),
            area=tuple(area), node_perimeter=tuple(perim),
            interior_shared_perimeter=tuple(shared),
            cut_edges=frozenset(cut), intra_flow_sum=intra, inter_flow_sum=inter,
        )

    def units_of(self, d: int) -> frozenset[str]:
        if not 1 <= d <= self.k:
            raise UnknownDistrict(f"district {d} not in 1..{self.k}")
        return self.district_units[d - 1]

    def recombine(
        self,
        flows: FlowMatrix,
        a: int,
        b: int,
        side_nodes: frozenset[str],
    ) -> "Partition":
        """New partition where districts a and b are replaced by side_nodes
        (labelled min(a,b)) and the remainder of the merged region
        (labelled max(a,b)). Only caches touching the merged region move."""
        lo, hi = (a, b) if a < b else (b, a)
        region = self.district_units[a - 1] | self.district_units[b - 1]
        if not side_nodes or side_nodes == region:
            raise ValueError("recombine requires two nonempty sides")
        if not side_nodes <= region:
            raise ValueError("side nodes stray outside the merged region")
        rest = region - side_nodes

        assignment = dict(self.assignment)
        for nid in side_nodes:
            assignment[nid] = lo
        for nid in rest:
            assignment[nid] = hi

        units = list(self.district_units)
        units[lo - 1] = frozenset(side_nodes)
        units[hi - 1] = frozenset(rest)

        pop = list(self.population)
        dem = list(self.votes_dem)
        rep = list(self.votes_rep)
        area = list(self.area)
        perim = list(self.node_perimeter)
        shared = list(self.interior_shared_perimeter)
        for d, members in ((lo, side_nodes), (hi, rest)):
            i = d - 1
            pop[i] = 0
            dem[i] = rep[i] = area[i] = perim[i] = 0.0
            for nid in sorted(members):
                node = self.graph.nodes[nid]
                pop[i] += node.population
                dem[i] += node.votes_dem
                rep[i] += node.votes_rep
                area[i] += node.area
                perim[i] += node.perimeter
            shared[i] = sum(
                self.graph.edges[key].shared_perimeter
                for key in self.graph.region_edge_keys(members)
            )

        cut = set(self.cut_edges)
        for key in self.graph.incident_edge_keys(region):
            u, v = key
            if assignment[u] == assignment[v]:
                cut.discard(key)
            else:
                cut.add(key)

        intra = self.intra_flow_sum
        inter = self.inter_flow_sum
        old = self.assignment
        for key in flows.touching(region):
            o, d = key
            f = flows.entries[key]
            if old[o] == old[d]:
                intra -= f
            else:
                inter -= f
            if assignment[o] == assignment[d]:
                intra += f
            else:
                inter += f

        return Partition(
            graph=self.graph, k=self.k, assignment=assignment,
            district_units=tuple(units),
            population=tuple(pop), votes_dem=tuple(dem), votes_rep=tuple(rep),
            area=tuple(area), node_perimeter=tuple(perim),
            interior_shared_perimeter=tuple(shared),
            cut_edges=frozenset(cut), intra_flow_sum=intra, inter_flow_sum=inter,
        )


def contiguous(partition: Partition, graph: UnitGraph) -> bool:
    """True iff every district's induced subgraph is connected."""
    for members in partition.district_units:
        if not members:
            return False
        if len(_components(members, graph.neighbors)) != 1:
            return False
    return True


def cut_edge_count(partition: Partition) -> int:
    return len(partition.cut_edges)


def district_geometry(partition: Partition, d: int) -> tuple[float, float]:
    """(area, perimeter) of district d.

    The perimeter is the node perimeter sum minus twice the interior shared
    boundary, which is exact for polygonal tilings."""
    if not 1 <= d <= partition.k:
        raise UnknownDistrict(f"district {d} not in 1..{partition.k}")
    i = d - 1
    area = partition.area[i]
    perimeter = partition.node_perimeter[i] - 2.0 * partition.interior_shared_perimeter[i]
    return area, perimeter
