"""districtflow: ensemble sampling of redistricting plans with
spatial-interaction, compactness, and fairness metrics."""

__version__ = "0.1.0"

from .analysis import (
    Ensemble,
    KSResult,
    SeatBand,
    Summary,
    compare_ensembles,
    ks_two_sample,
    point_cloud,
    seat_bands,
    summarize,
)
from .chain import Chain, ChainConfig, RejectionReason, StepRecord, run_chain
from .flows import (
    DeviceFlowRecord,
    FlowMatrix,
    OriginStats,
    disaggregate_votes,
    monthly_average,
    scale_flows,
)
from .graph import (
    Partition,
    UnitEdge,
    UnitGraph,
    UnitNode,
    build_graph,
    contiguous,
    cut_edge_count,
    district_geometry,
)
from .metrics import (
    PlanMetrics,
    efficiency_gap,
    interaction_ratio,
    ir_delta,
    polsby_popper,
    score_plan,
    seat_allocation,
)
from .recom import (
    CutCandidate,
    Method,
    ProposalConfig,
    SpanningTree,
    build_tree,
    enumerate_balanced_cuts,
    propose,
    seed_plan,
    select_cut,
    select_merge_pair,
)

__all__ = [
    "__version__",
    "Chain", "ChainConfig", "RejectionReason", "StepRecord", "run_chain",
    "CutCandidate", "Method", "ProposalConfig", "SpanningTree",
    "build_tree", "enumerate_balanced_cuts", "propose", "seed_plan",
    "select_cut", "select_merge_pair",
    "DeviceFlowRecord", "FlowMatrix", "OriginStats",
    "disaggregate_votes", "monthly_average", "scale_flows",
    "Partition", "UnitEdge", "UnitGraph", "UnitNode",
    "build_graph", "contiguous", "cut_edge_count", "district_geometry",
    "PlanMetrics", "efficiency_gap", "interaction_ratio", "ir_delta",
    "polsby_popper", "score_plan", "seat_allocation",
    "Ensemble", "KSResult", "SeatBand", "Summary",
    "compare_ensembles", "ks_two_sample", "point_cloud", "seat_bands", "summarize",
]
