"""Plan scoring: interaction ratio, compactness, efficiency gap, seats.

All functions here are pure; they can be called from any thread.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

from .errors import (
    NonpositiveGeometry,
    ProposalOutsideMergedRegion,
    TiedDistrict,
    ZeroInterFlows,
    ZeroVoteDistrict,
)
from .flows import FlowKey, FlowMatrix
from .graph import Partition, UnitGraph, district_geometry


@dataclass(frozen=True)
class PlanMetrics:
    """All per-plan scores, serializable as one flat JSON object.

    List fields index districts 1..k in order. normalized_ir is
    intra / (intra + inter) = ir / (1 + ir).
    """

    ir: float
    normalized_ir: float
    mean_polsby_popper: float
    per_district_pp: tuple[float, ...]
    efficiency_gap: float
    per_district_eg: tuple[float, ...]
    seats_dem: int
    seats_rep: int
    intra_flows: float
    inter_flows: float
    cut_edges: int

    def to_dict(self) -> dict:
        return {
            "ir": self.ir,
            "normalized_ir": self.normalized_ir,
            "mean_polsby_popper": self.mean_polsby_popper,
            "per_district_pp": list(self.per_district_pp),
            "efficiency_gap": self.efficiency_gap,
            "per_district_eg": list(self.per_district_eg),
            "seats_dem": self.seats_dem,
            "seats_rep": self.seats_rep,
            "intra_flows": self.intra_flows,
            "inter_flows": self.inter_flows,
            "cut_edges": self.cut_edges,
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "PlanMetrics":
        return cls(
            ir=d["ir"],
            normalized_ir=d["normalized_ir"],
            mean_polsby_popper=d["mean_polsby_popper"],
            per_district_pp=tuple(d["per_district_pp"]),
            efficiency_gap=d["efficiency_gap"],
            per_district_eg=tuple(d["per_district_eg"]),
            seats_dem=d["seats_dem"],
            seats_rep=d["seats_rep"],
            intra_flows=d["intra_flows"],
            inter_flows=d["inter_flows"],
            cut_edges=d["cut_edges"],
        )


def interaction_ratio(partition: Partition, flows: FlowMatrix) -> tuple[float, float, float]:
    """(ir, intra, inter) for the plan by a full pass over the flow matrix.

    Self-flows count as intra: a unit is trivially in its own district.
    Raises ZeroInterFlows when no flow crosses a boundary (e.g. k=1).
    """
    assignment = partition.assignment
    intra = 0.0
    inter = 0.0
    for (o, d), f in flows.entries.items():
        if assignment[o] == assignment[d]:
            intra += f
        else:
            inter += f
    if inter == 0.0:
        raise ZeroInterFlows("no inter-district flow; interaction ratio undefined")
    return intra / inter, intra, inter


def ir_delta(
    partition: Partition,
    flows: FlowMatrix,
    merged: tuple[int, int],
    proposal: Mapping[str, int],
) -> tuple[float, float]:
    """Intra/inter sums after reassigning merged-region nodes per proposal.

    Only flow entries with an endpoint in the merged region are touched, so
    this is cheap enough to evaluate once per cut candidate. The output sums
    to the same total as the input partition's.
    """
    a, b = merged
    region = partition.units_of(a) | partition.units_of(b)
    for nid in proposal:
        if nid not in region:
            raise ProposalOutsideMergedRegion(
                f"proposal reassigns {nid!r} outside districts {a} and {b}"
            )
    touching = list(flows.touching(region))
    return _delta_over(partition, flows, touching, proposal)


def _delta_over(
    partition: Partition,
    flows: FlowMatrix,
    touching: list[FlowKey],
    proposal: Mapping[str, int],
) -> tuple[float, float]:
    old = partition.assignment
    intra = partition.intra_flow_sum
    inter = partition.inter_flow_sum
    entries = flows.entries
    for key in touching:
        o, d = key
        f = entries[key]
        if old[o] == old[d]:
            intra -= f
        else:
            inter -= f
        if proposal.get(o, old[o]) == proposal.get(d, old[d]):
            intra += f
        else:
            inter += f
    return intra, inter


def polsby_popper(area: float, perimeter: float) -> float:
    """4*pi*area / perimeter**2, the isoperimetric compactness in (0, 1]."""
    if area <= 0 or perimeter <= 0:
        raise NonpositiveGeometry(f"area={area}, perimeter={perimeter}")
    return 4.0 * math.pi * area / (perimeter * perimeter)


def _wasted_votes(dem: float, rep: float, district: int) -> tuple[float, float]:
    """Per-district wasted votes under the 50%-plus-one rule.

    The winner wastes everything beyond total/2 + 1 (no flooring: vote
    disaggregation produces fractional tallies); the loser wastes all.
    """
    total = dem + rep
    if total <= 0:
        raise ZeroVoteDistrict(district)
    if dem == rep:
        raise TiedDistrict(district)
    threshold = total / 2.0 + 1.0
    if dem > rep:
        return dem - threshold, rep
    return dem, rep - threshold


def efficiency_gap(partition: Partition) -> tuple[float, tuple[float, ...]]:
    """(statewide efficiency gap, per-district shares).

    The statewide value is (wasted dem - wasted rep) / total votes; each
    district's share uses the same statewide denominator, so the shares sum
    to the statewide gap.
    """
    total_votes = sum(partition.votes_dem) + sum(partition.votes_rep)
    per_district = []
    for d in range(1, partition.k + 1):
        wd, wr = _wasted_votes(partition.votes_dem[d - 1], partition.votes_rep[d - 1], d)
        per_district.append((wd - wr) / total_votes)
    return sum(per_district), tuple(per_district)


def seat_allocation(partition: Partition) -> tuple[int, int]:
    """(seats_dem, seats_rep) by per-district majority; exact ties raise."""
    seats_dem = 0
    for d in range(1, partition.k + 1):
        dem = partition.votes_dem[d - 1]
        rep = partition.votes_rep[d - 1]
        if dem == rep:
            raise TiedDistrict(d)
        if dem > rep:
            seats_dem += 1
    return seats_dem, partition.k - seats_dem


def score_plan(partition: Partition, graph: UnitGraph, flows: FlowMatrix) -> PlanMetrics:
    """Assemble every plan metric into one record.

    Flow sums come from the partition caches (kept equal to recomputation by
    construction); plan compactness is the unweighted mean of per-district
    Polsby-Popper scores.
    """
    intra = partition.intra_flow_sum
    inter = partition.inter_flow_sum
    if inter == 0.0:
        raise ZeroInterFlows("no inter-district flow; interaction ratio undefined")
    ir = intra / inter

    pp = tuple(
        polsby_popper(*district_geometry(partition, d))
        for d in range(1, partition.k + 1)
    )
    eg, per_district_eg = efficiency_gap(partition)
    seats_dem, seats_rep = seat_allocation(partition)

    return PlanMetrics(
        ir=ir,
        normalized_ir=intra / (intra + inter),
        mean_polsby_popper=sum(pp) / len(pp),
        per_district_pp=pp,
        efficiency_gap=eg,
        per_district_eg=per_district_eg,
        seats_dem=seats_dem,
        seats_rep=seats_rep,
        intra_flows=intra,
        inter_flows=inter,
        cut_edges=len(partition.cut_edges),
    )
