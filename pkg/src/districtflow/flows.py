"""Origin-destination flow matrix: device-count scaling, monthly averaging,
and ward-to-unit vote disaggregation.

Flows absent from the input are treated as zero throughout (suppressed
low-count pairs are not imputed).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

from .errors import (
    EmptyList,
    MissingOriginStats,
    NegativeWeight,
    WeightsNotNormalized,
    ZeroDevices,
)

FlowKey = tuple[str, str]


@dataclass(frozen=True)
class DeviceFlowRecord:
    """One raw device-visit count from origin to destination for a month."""

    origin: str
    destination: str
    device_flows: float

    def __post_init__(self):
        if self.device_flows < 0:
            raise ValueError(f"negative device_flows for ({self.origin}, {self.destination})")


@dataclass(frozen=True)
class OriginStats:
    """Resident population and observed device count for one origin unit."""

    origin: str
    pop: int
    num_devices: int


class FlowMatrix:
    """Sparse directed O-D matrix of person-trips per month.

    Immutable after construction and safe to share across threads. Entries
    are stored in canonical (origin, destination) order so that digests and
    iteration order are stable. An incidence index maps each unit to the
    entry keys touching it, which the partition code uses for incremental
    intra/inter updates.
    """

    __slots__ = ("entries", "total_flow", "_incident")

    def __init__(self, entries: Mapping[FlowKey, float]):
        canon: dict[FlowKey, float] = {}
        for key in sorted(entries):
            value = float(entries[key])
            if value < 0:
                raise ValueError(f"negative flow for {key}")
            canon[key] = value
        self.entries: dict[FlowKey, float] = canon
        self.total_flow: float = sum(canon.values())
        incident: dict[str, list[FlowKey]] = {}
        for key in canon:
            o, d = key
            incident.setdefault(o, []).append(key)
            if d != o:
                incident.setdefault(d, []).append(key)
        self._incident: dict[str, tuple[FlowKey, ...]] = {
            node: tuple(keys) for node, keys in incident.items()
        }

    def get(self, origin: str, destination: str) -> float:
        return self.entries.get((origin, destination), 0.0)

    def touching(self, region: frozenset[str] | set[str]) -> Iterator[FlowKey]:
        """Yield each entry key with at least one endpoint in region, once.

        An entry is owned by its origin when the origin lies in the region,
        otherwise by its destination; iterating owners avoids duplicates.
        """
        for node in region:
            for key in self._incident.get(node, ()):
                o, d = key
                owner = o if o in region else d
                if owner == node:
                    yield key

    def __len__(self) -> int:
        return len(self.entries)


def scale_flows(
    records: Iterable[DeviceFlowRecord],
    stats: Mapping[str, OriginStats],
) -> FlowMatrix:
    """Scale device visits to population-level flows.

    Each record contributes device_flows * pop(origin) / num_devices(origin);
    duplicate (origin, destination) pairs sum, as monthly files naturally
    repeat pairs.
    """
    entries: dict[FlowKey, float] = {}
    for rec in records:
        st = stats.get(rec.origin)
        if st is None:
            raise MissingOriginStats(rec.origin)
        if st.num_devices <= 0:
            raise ZeroDevices(rec.origin)
        scaled = rec.device_flows * (st.pop / st.num_devices)
        key = (rec.origin, rec.destination)
        entries[key] = entries.get(key, 0.0) + scaled
    return FlowMatrix(entries)


def monthly_average(matrices: list[FlowMatrix]) -> FlowMatrix:
    """Entry-wise mean over months; a pair absent in a month counts as zero."""
    if not matrices:
        raise EmptyList("monthly_average needs at least one matrix")
    n = len(matrices)
    sums: dict[FlowKey, float] = {}
    for m in matrices:
        for key, value in m.entries.items():
            sums[key] = sums.get(key, 0.0) + value
    return FlowMatrix({key: value / n for key, value in sums.items()})


def disaggregate_votes(
    ward_votes: Mapping[str, tuple[float, float]],
    weights: Mapping[tuple[str, str], float],
) -> dict[str, tuple[float, float]]:
    """Split ward-level (dem, rep) tallies onto units by the given weights.

    Weights for each ward must be nonnegative and sum to 1 within 1e-9;
    statewide totals are conserved by construction. Vote shares come out
    fractional, which downstream metrics carry as reals.
    """
    per_ward_total: dict[str, float] = {}
    for (ward, _unit), w in weights.items():
        if w < 0:
            raise NegativeWeight(f"negative weight for ward {ward!r}")
        per_ward_total[ward] = per_ward_total.get(ward, 0.0) + w
    for ward in ward_votes:
        total = per_ward_total.get(ward, 0.0)
        if abs(total - 1.0) > 1e-9:
            raise WeightsNotNormalized(ward, total)

    out: dict[str, tuple[float, float]] = {}
    for (ward, unit), w in sorted(weights.items()):
        if ward not in ward_votes:
            continue
        dem, rep = ward_votes[ward]
        prev = out.get(unit, (0.0, 0.0))
        out[unit] = (prev[0] + dem * w, prev[1] + rep * w)
    return out
