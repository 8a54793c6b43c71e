"""Ensemble statistics: distribution summaries, two-sample KS tests,
seat-allocation banding, and the 3D metric point cloud.

Everything here is a pure function over immutable ensembles.
"""

from __future__ import annotations

from dataclasses import dataclass, fields as dataclass_fields

import numpy as np
from scipy.special import kolmogorov

from .chain import StepRecord
from .errors import DigestMismatch, EmptySample, UnknownField
from .metrics import PlanMetrics

_METRIC_FIELDS = {f.name for f in dataclass_fields(PlanMetrics)}


@dataclass(frozen=True)
class Ensemble:
    """Accepted records of one chain plus provenance digests."""

    label: str
    records: tuple[StepRecord, ...]
    config_digest: str = ""
    graph_digest: str = ""
    flow_digest: str = ""

    def __post_init__(self):
        if not self.records:
            raise ValueError(f"ensemble {self.label!r} has no records")
        if any(not r.accepted for r in self.records):
            raise ValueError("ensembles hold accepted records only")

    def values(self, field: str) -> np.ndarray:
        if field not in _METRIC_FIELDS:
            raise UnknownField(f"{field!r} is not a plan metric")
        return np.array([getattr(r.metrics, field) for r in self.records], dtype=float)

    @classmethod
    def from_records(cls, label: str, records, **digests) -> "Ensemble":
        accepted = tuple(r for r in records if r.accepted)
        return cls(label=label, records=accepted, **digests)


def ensure_comparable(*ensembles: Ensemble) -> None:
    """Refuse to combine ensembles built on different graph/flow inputs."""
    pairs = {(e.graph_digest, e.flow_digest) for e in ensembles}
    if len(pairs) > 1:
        raise DigestMismatch(
            "ensembles were produced from different graph/flow inputs: "
            + ", ".join(e.label for e in ensembles)
        )


@dataclass(frozen=True)
class Summary:
    min: float
    max: float
    mean: float
    median: float
    q1: float
    q3: float

    def to_dict(self) -> dict:
        return {"min": self.min, "max": self.max, "mean": self.mean,
                "median": self.median, "q1": self.q1, "q3": self.q3}


def summarize(ensemble: Ensemble, field: str) -> Summary:
    """Order statistics of one metric; quartiles interpolate linearly."""
    values = ensemble.values(field)
    return Summary(
        min=float(values.min()),
        max=float(values.max()),
        mean=float(values.mean()),
        median=float(np.median(values)),
        q1=float(np.quantile(values, 0.25)),
        q3=float(np.quantile(values, 0.75)),
    )


@dataclass(frozen=True)
class KSResult:
    statistic: float
    p_value: float
    n1: int
    n2: int

    def to_dict(self) -> dict:
        return {"statistic": self.statistic, "p_value": self.p_value,
                "n1": self.n1, "n2": self.n2}


def ks_two_sample(a, b) -> KSResult:
    """Two-sample Kolmogorov-Smirnov test.

    The statistic is the exact supremum distance between the empirical CDFs
    over the pooled sample points; the p-value uses the asymptotic
    Kolmogorov distribution at effective size n1*n2/(n1+n2).
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.size == 0 or b.size == 0:
        raise EmptySample("both samples must be nonempty")
    a_sorted = np.sort(a)
    b_sorted = np.sort(b)
    pooled = np.concatenate([a_sorted, b_sorted])
    cdf_a = np.searchsorted(a_sorted, pooled, side="right") / a.size
    cdf_b = np.searchsorted(b_sorted, pooled, side="right") / b.size
    statistic = float(np.abs(cdf_a - cdf_b).max())
    effective = a.size * b.size / (a.size + b.size)
    p_value = float(np.clip(kolmogorov(np.sqrt(effective) * statistic), 0.0, 1.0))
    return KSResult(statistic=statistic, p_value=p_value, n1=int(a.size), n2=int(b.size))


def compare_ensembles(a: Ensemble, b: Ensemble, field: str) -> KSResult:
    """KS test between two ensembles on one metric, after a digest check."""
    ensure_comparable(a, b)
    return ks_two_sample(a.values(field), b.values(field))


@dataclass(frozen=True)
class SeatBand:
    seats_dem: int
    seats_rep: int
    count: int
    mean_efficiency_gap: float

    def to_dict(self) -> dict:
        return {"seats_dem": self.seats_dem, "seats_rep": self.seats_rep,
                "count": self.count, "mean_efficiency_gap": self.mean_efficiency_gap}


def seat_bands(ensemble: Ensemble) -> list[SeatBand]:
    """Group plans by seat allocation; report the count and the mean
    efficiency gap per band, sorted by Democratic seats ascending."""
    groups: dict[tuple[int, int], list[float]] = {}
    for rec in ensemble.records:
        key = (rec.metrics.seats_dem, rec.metrics.seats_rep)
        groups.setdefault(key, []).append(rec.metrics.efficiency_gap)
    return [
        SeatBand(seats_dem=key[0], seats_rep=key[1], count=len(egs),
                 mean_efficiency_gap=sum(egs) / len(egs))
        for key, egs in sorted(groups.items())
    ]


def point_cloud(ensembles: list[Ensemble]) -> list[list]:
    """Rows of (compactness, efficiency gap, interaction ratio, label), one
    per accepted plan: the exact payload behind the explorer's 3D cube."""
    if not ensembles:
        raise ValueError("point_cloud needs at least one ensemble")
    ensure_comparable(*ensembles)
    rows: list[list] = [["compactness", "efficiency_gap", "ir", "ensemble"]]
    for ens in ensembles:
        for rec in ens.records:
            m = rec.metrics
            rows.append([m.mean_polsby_popper, m.efficiency_gap, m.ir, ens.label])
    return rows
