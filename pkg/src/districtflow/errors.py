"""Exception types shared across the engine."""

from __future__ import annotations


class DistrictFlowError(Exception):
    """Base class for all engine errors."""


# -- graph construction ------------------------------------------------------

class DuplicateNode(DistrictFlowError):
    pass


class DuplicateEdge(DistrictFlowError):
    pass


class UnknownEndpoint(DistrictFlowError):
    pass


class DisconnectedGraph(DistrictFlowError):
    """Raised when the unit graph splits into components; lists them."""

    def __init__(self, components: list[set[str]]):
        self.components = components
        sizes = ", ".join(str(len(c)) for c in components)
        super().__init__(
            f"graph is not connected: {len(components)} components with sizes [{sizes}]"
        )


class UnknownDistrict(DistrictFlowError):
    pass


class NotContiguousDistrict(DistrictFlowError):
    pass


# -- flow ingestion ----------------------------------------------------------

class MissingOriginStats(DistrictFlowError):
    def __init__(self, origin: str):
        self.origin = origin
        super().__init__(f"no origin stats for {origin!r}")


class ZeroDevices(DistrictFlowError):
    def __init__(self, origin: str):
        self.origin = origin
        super().__init__(f"origin {origin!r} has zero devices; population scaling undefined")


class EmptyList(DistrictFlowError):
    pass


class WeightsNotNormalized(DistrictFlowError):
    def __init__(self, ward: str, total: float):
        self.ward = ward
        self.total = total
        super().__init__(f"weights for ward {ward!r} sum to {total!r}, expected 1")


class NegativeWeight(DistrictFlowError):
    pass


# -- metrics -----------------------------------------------------------------

class ZeroInterFlows(DistrictFlowError):
    """No flow crosses any district boundary; the interaction ratio is undefined."""


class ProposalOutsideMergedRegion(DistrictFlowError):
    pass


class NonpositiveGeometry(DistrictFlowError):
    pass


class ZeroVoteDistrict(DistrictFlowError):
    def __init__(self, district: int):
        self.district = district
        super().__init__(f"district {district} has zero total votes")


class TiedDistrict(DistrictFlowError):
    def __init__(self, district: int):
        self.district = district
        super().__init__(f"district {district} has an exact vote tie")


# -- proposals ---------------------------------------------------------------

class NoCutEdges(DistrictFlowError):
    pass


class DisconnectedSubgraph(DistrictFlowError):
    pass


class EmptyCandidates(DistrictFlowError):
    pass


class RetriesExhausted(DistrictFlowError):
    pass


# -- chains ------------------------------------------------------------------

class InvalidSeedPlan(DistrictFlowError):
    pass


class StepStalled(DistrictFlowError):
    pass


class CorruptCheckpoint(DistrictFlowError):
    pass


# -- analysis ----------------------------------------------------------------

class UnknownField(DistrictFlowError):
    pass


class EmptySample(DistrictFlowError):
    pass


class DigestMismatch(DistrictFlowError):
    pass


# -- export ------------------------------------------------------------------

class UnknownUnitInAssignment(DistrictFlowError):
    def __init__(self, unit: str):
        self.unit = unit
        super().__init__(f"assignment references unknown unit {unit!r}")


class ConfigError(DistrictFlowError):
    pass
