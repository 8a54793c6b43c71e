"""One recombination proposal: merge two adjacent districts, draw a random
maximum spanning tree over them (optionally flow-biased), enumerate the
population-balanced cuts, and pick one.

Determinism contract: every function consumes the given Generator in a fixed
order over a canonical edge ordering (sorted endpoint ids), so a fixed seed
reproduces proposals exactly.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .errors import (
    DisconnectedSubgraph,
    EmptyCandidates,
    NoCutEdges,
    RetriesExhausted,
)
from .flows import FlowMatrix
from .graph import EdgeKey, Partition, UnitGraph, edge_key
from .metrics import _delta_over


class Method(str, enum.Enum):
    RST = "RST"
    BIASED_RST = "BiasedRST"
    MAX_IR_CUT = "MaxIRCut"
    MIN_IR_CUT = "MinIRCut"


@dataclass(frozen=True)
class ProposalConfig:
    """Proposal settings: tree method, bias factor, population tolerance.

    epsilon is the full tolerance fraction: each district must stay within
    ideal * (1 +/- epsilon/2), so the spread between the largest and
    smallest district is at most epsilon * ideal.
    """

    method: Method = Method.RST
    bias: float | None = None
    epsilon: float = 0.03
    max_tree_retries: int = 10_000

    def __post_init__(self):
        if not 0.0 <= self.epsilon < 0.5:
            raise ValueError(f"epsilon must lie in [0, 0.5), got {self.epsilon}")
        if self.max_tree_retries < 1:
            raise ValueError("max_tree_retries must be positive")
        if self.method is Method.BIASED_RST:
            if self.bias is None or self.bias == 0:
                raise ValueError("BiasedRST needs a nonzero bias factor")
        elif self.bias is not None:
            raise ValueError(f"bias is only meaningful for BiasedRST, not {self.method.value}")

    def to_dict(self) -> dict:
        return {
            "method": self.method.value,
            "bias": self.bias,
            "epsilon": self.epsilon,
            "max_tree_retries": self.max_tree_retries,
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "ProposalConfig":
        return cls(
            method=Method(d["method"]),
            bias=d.get("bias"),
            epsilon=d.get("epsilon", 0.03),
            max_tree_retries=d.get("max_tree_retries", 10_000),
        )


@dataclass(frozen=True)
class SpanningTree:
    """Spanning tree of a merged region, rooted at its smallest node id.

    order is a parent-before-child traversal, so one reversed pass
    accumulates subtree populations.
    """

    nodes: frozenset[str]
    root: str
    parent: dict[str, str | None]
    edges: tuple[EdgeKey, ...]
    order: tuple[str, ...]


@dataclass(frozen=True)
class CutCandidate:
    """A tree edge whose removal splits the region into two balanced parts.

    side_nodes is the subtree below the edge; its complement within the
    merged region forms the other part.
    """

    edge: EdgeKey
    side_root: str
    side_nodes: frozenset[str]
    side_population: int

    def induced_assignment(
        self, region: frozenset[str], label_side: int, label_rest: int
    ) -> dict[str, int]:
        out = {}
        for nid in region:
            out[nid] = label_side if nid in self.side_nodes else label_rest
        return out


def select_merge_pair(partition: Partition, rng: np.random.Generator) -> tuple[int, int]:
    """Two districts incident to a cut edge drawn uniformly from cut_edges.

    Adjacent pairs are therefore selected proportionally to their shared
    boundary edge count, keeping proposals local to long boundaries.
    """
    if not partition.cut_edges:
        raise NoCutEdges("partition has no cut edges (k=1?)")
    keys = sorted(partition.cut_edges)
    u, v = keys[int(rng.integers(len(keys)))]
    a, b = partition.assignment[u], partition.assignment[v]
    return (a, b) if a < b else (b, a)


class _UnionFind:
    __slots__ = ("parent", "rank")

    def __init__(self, items):
        self.parent = {x: x for x in items}
        self.rank = {x: 0 for x in items}

    def find(self, x):
        parent = self.parent
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, x, y) -> bool:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        if self.rank[rx] < self.rank[ry]:
            rx, ry = ry, rx
        self.parent[ry] = rx
        if self.rank[rx] == self.rank[ry]:
            self.rank[rx] += 1
        return True


def build_tree(
    region: frozenset[str] | set[str],
    graph: UnitGraph,
    config: ProposalConfig,
    rng: np.random.Generator,
) -> SpanningTree:
    """Random maximum spanning tree over the induced subgraph on region.

    RST draws one uniform weight per edge. BiasedRST multiplies that weight
    by the edge's flow weight and the bias factor, steering trees toward
    (positive bias) or away from (negative bias) high-flow adjacencies;
    zero-flow edges collapse to weight 0 regardless of the draw, so an
    independent uniform key breaks those ties deterministically.
    """
    region = frozenset(region)
    keys = list(graph.region_edge_keys(region))
    m = len(keys)
    if m < len(region) - 1:
        raise DisconnectedSubgraph(f"region of {len(region)} nodes has only {m} edges")

    primary = rng.random(m)
    if config.method is Method.BIASED_RST:
        weights = primary * np.array(
            [graph.edges[k].flow_weight for k in keys]
        ) * config.bias
        secondary = rng.random(m)
    else:
        weights = primary
        secondary = np.zeros(m)

    order = sorted(range(m), key=lambda i: (-weights[i], -secondary[i]))
    uf = _UnionFind(region)
    tree_edges: list[EdgeKey] = []
    adjacency: dict[str, list[str]] = {nid: [] for nid in region}
    for i in order:
        u, v = keys[i]
        if uf.union(u, v):
            tree_edges.append(keys[i])
            adjacency[u].append(v)
            adjacency[v].append(u)
            if len(tree_edges) == len(region) - 1:
                break
    if len(tree_edges) != len(region) - 1:
        raise DisconnectedSubgraph("induced subgraph is not connected")

    root = min(region)
    parent: dict[str, str | None] = {root: None}
    traversal = [root]
    stack = [root]
    while stack:
        cur = stack.pop()
        for nb in sorted(adjacency[cur]):
            if nb not in parent:
                parent[nb] = cur
                traversal.append(nb)
                stack.append(nb)

    return SpanningTree(
        nodes=region,
        root=root,
        parent=parent,
        edges=tuple(sorted(tree_edges)),
        order=tuple(traversal),
    )


def enumerate_balanced_cuts(
    tree: SpanningTree,
    graph: UnitGraph,
    epsilon: float,
    plan_ideal_pop: float,
) -> list[CutCandidate]:
    """Tree edges whose removal leaves both parts within the population band
    [ideal*(1 - epsilon/2), ideal*(1 + epsilon/2)].

    One reversed pass over the traversal order accumulates subtree
    populations; an empty result is legal and triggers a tree retry
    upstream. Candidates come back sorted by cut edge for deterministic
    indexing.
    """
    subtree_pop = {nid: graph.nodes[nid].population for nid in tree.nodes}
    children: dict[str, list[str]] = {nid: [] for nid in tree.nodes}
    for nid in reversed(tree.order):
        p = tree.parent[nid]
        if p is not None:
            subtree_pop[p] += subtree_pop[nid]
            children[p].append(nid)

    total = subtree_pop[tree.root]
    lo = plan_ideal_pop * (1.0 - epsilon / 2.0)
    hi = plan_ideal_pop * (1.0 + epsilon / 2.0)

    candidates = []
    for nid in tree.order:
        p = tree.parent[nid]
        if p is None:
            continue
        side = subtree_pop[nid]
        rest = total - side
        if lo <= side <= hi and lo <= rest <= hi:
            side_nodes = set()
            stack = [nid]
            while stack:
                cur = stack.pop()
                side_nodes.add(cur)
                stack.extend(children[cur])
            candidates.append(
                CutCandidate(
                    edge=edge_key(nid, p),
                    side_root=nid,
                    side_nodes=frozenset(side_nodes),
                    side_population=side,
                )
            )
    candidates.sort(key=lambda c: c.edge)
    return candidates


def select_cut(
    candidates: list[CutCandidate],
    config: ProposalConfig,
    partition: Partition,
    flows: FlowMatrix,
    merged: tuple[int, int],
    rng: np.random.Generator,
) -> CutCandidate:
    """Pick the cut: uniformly at random for RST/BiasedRST, or the candidate
    whose resulting plan has the highest (MaxIRCut) or lowest (MinIRCut)
    interaction ratio.

    Only merged-region flows change between candidates, so the local delta
    ranks candidates exactly as a full recomputation would. Equal ratios tie
    toward the lowest candidate index (candidates are edge-sorted)."""
    if not candidates:
        raise EmptyCandidates("no balanced cut to select")
    if config.method in (Method.RST, Method.BIASED_RST):
        return candidates[int(rng.integers(len(candidates)))]

    a, b = merged
    lo, hi = (a, b) if a < b else (b, a)
    region = partition.units_of(a) | partition.units_of(b)
    touching = list(flows.touching(region))

    best_index = 0
    best_ir: float | None = None
    for i, cand in enumerate(candidates):
        proposal = cand.induced_assignment(region, lo, hi)
        intra, inter = _delta_over(partition, flows, touching, proposal)
        ir = intra / inter if inter > 0 else float("inf")
        if best_ir is None:
            best_ir = ir
            continue
        if config.method is Method.MAX_IR_CUT and ir > best_ir:
            best_ir, best_index = ir, i
        elif config.method is Method.MIN_IR_CUT and ir < best_ir:
            best_ir, best_index = ir, i
    return candidates[best_index]


def propose(
    partition: Partition,
    graph: UnitGraph,
    flows: FlowMatrix,
    config: ProposalConfig,
    rng: np.random.Generator,
    budget: int | None = None,
) -> Partition:
    """One full proposal: returns a partition differing from the input only
    in the two merged districts, contiguous and population-balanced by
    construction. Retries tree construction, up to max_tree_retries (or the
    given budget) trees, when no balanced cut exists."""
    return propose_with_usage(partition, graph, flows, config, rng, budget)[0]


def propose_with_usage(
    partition: Partition,
    graph: UnitGraph,
    flows: FlowMatrix,
    config: ProposalConfig,
    rng: np.random.Generator,
    budget: int | None = None,
) -> tuple[Partition, int]:
    """propose() plus the number of trees drawn, so callers running several
    attempts per step can enforce one combined retry budget."""
    a, b = select_merge_pair(partition, rng)
    region = partition.units_of(a) | partition.units_of(b)
    ideal = graph.total_population / partition.k
    tries = config.max_tree_retries if budget is None else budget

    for used in range(1, tries + 1):
        tree = build_tree(region, graph, config, rng)
        candidates = enumerate_balanced_cuts(tree, graph, config.epsilon, ideal)
        if candidates:
            cut = select_cut(candidates, config, partition, flows, (a, b), rng)
            return partition.recombine(flows, a, b, cut.side_nodes), used
    raise RetriesExhausted(
        f"no balanced cut for districts ({a}, {b}) after "
        f"{tries} trees; epsilon may be too tight"
    )


def seed_plan(
    graph: UnitGraph,
    flows: FlowMatrix,
    k: int,
    epsilon: float,
    rng: np.random.Generator,
    max_tree_retries: int = 10_000,
) -> Partition:
    """Initial k-district plan by recursive tree bisection.

    Each split sends a share of the districts to either side. Intermediate
    groups are held to half the final tolerance so their own splits stay
    feasible, and a failed child split backtracks to redraw the parent cut.
    """
    ideal = graph.total_population / k
    config = ProposalConfig(method=Method.RST, epsilon=epsilon,
                            max_tree_retries=max_tree_retries)

    def bisect(region: frozenset[str], m: int) -> list[frozenset[str]] | None:
        if m == 1:
            return [region]
        m1 = m // 2
        m2 = m - m1
        for _ in range(max_tree_retries):
            tree = build_tree(region, graph, config, rng)
            side = _find_group_cut(tree, graph, epsilon, ideal, m1, m2)
            if side is None:
                continue
            left = bisect(side, m1)
            if left is None:
                continue
            right = bisect(region - side, m2)
            if right is None:
                continue
            return left + right
        return None

    districts = bisect(frozenset(graph.nodes), k)
    if districts is None:
        raise RetriesExhausted(
            f"could not bisect the graph into {k} balanced districts; "
            f"epsilon may be too tight for the unit populations"
        )
    assignment = {
        nid: label
        for label, members in enumerate(districts, start=1)
        for nid in members
    }
    return Partition.from_assignment(graph, flows, assignment, k)


def _find_group_cut(
    tree: SpanningTree,
    graph: UnitGraph,
    epsilon: float,
    ideal: float,
    m1: int,
    m2: int,
) -> frozenset[str] | None:
    """Subtree whose population fits m1 districts while the rest fits m2.

    Final districts (m == 1) get the full band; multi-district groups are
    held to half of it so later splits have slack on both sides."""
    subtree_pop = {nid: graph.nodes[nid].population for nid in tree.nodes}
    children: dict[str, list[str]] = {nid: [] for nid in tree.nodes}
    for nid in reversed(tree.order):
        p = tree.parent[nid]
        if p is not None:
            subtree_pop[p] += subtree_pop[nid]
            children[p].append(nid)
    total = subtree_pop[tree.root]

    def fits(pop: float, m: int) -> bool:
        frac = epsilon / 2 if m == 1 else epsilon / 4
        return m * ideal * (1 - frac) <= pop <= m * ideal * (1 + frac)

    for nid in tree.order:
        if tree.parent[nid] is None:
            continue
        side = subtree_pop[nid]
        rest = total - side
        if fits(side, m1) and fits(rest, m2):
            side_nodes = set()
            stack = [nid]
            while stack:
                cur = stack.pop()
                side_nodes.add(cur)
                stack.extend(children[cur])
            return frozenset(side_nodes)
    return None
