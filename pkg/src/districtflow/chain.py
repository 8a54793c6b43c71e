"""Full chain runs: proposals plus the cut-edge compactness validator,
per-step records, checkpointing, and deterministic restarts.

A chain owns one partition. Each step attempt draws its randomness from a
substream addressed by (seed, step, attempt), so rejected attempts never
perturb later steps and a restored chain continues the exact record stream
an uninterrupted run would produce.
"""

from __future__ import annotations

import enum
import hashlib
import json
import pickle
from dataclasses import dataclass
from typing import Iterator

from .errors import (
    CorruptCheckpoint,
    DistrictFlowError,
    InvalidSeedPlan,
    RetriesExhausted,
    StepStalled,
    ZeroInterFlows,
)
from .flows import FlowMatrix
from .graph import Partition, UnitGraph, cut_edge_count
from .metrics import PlanMetrics, score_plan
from .recom import ProposalConfig, propose_with_usage
from .rng import substream

_CHECKPOINT_MAGIC = b"DFCHK1\n"


class RejectionReason(str, enum.Enum):
    COMPACTNESS_BOUND = "CompactnessBound"
    RETRIES_EXHAUSTED = "RetriesExhausted"


@dataclass(frozen=True)
class ChainConfig:
    """Run parameters. compactness_multiplier bounds every accepted plan's
    cut-edge count by multiplier times the seed plan's count."""

    proposal: ProposalConfig
    steps: int
    compactness_multiplier: float
    seed: int
    initial_plan: Partition
    record_assignments_every: int = 0

    def __post_init__(self):
        if self.steps < 1:
            raise ValueError("steps must be >= 1")
        if self.compactness_multiplier < 1:
            raise ValueError("compactness_multiplier must be >= 1")
        if self.record_assignments_every < 0:
            raise ValueError("record_assignments_every must be >= 0")

    def digest(self) -> str:
        payload = {
            "proposal": self.proposal.to_dict(),
            "steps": self.steps,
            "compactness_multiplier": self.compactness_multiplier,
            "seed": self.seed,
            "record_assignments_every": self.record_assignments_every,
            "initial_assignment": sorted(self.initial_plan.assignment.items()),
        }
        raw = json.dumps(payload, separators=(",", ":"), sort_keys=True).encode()
        return hashlib.sha256(raw).hexdigest()


@dataclass(frozen=True)
class StepRecord:
    """One chain event. Accepted records carry full metrics; rejections
    carry only the reason and never change chain state."""

    step: int
    accepted: bool
    metrics: PlanMetrics | None = None
    rejection_reason: RejectionReason | None = None
    assignment: dict[str, int] | None = None

    def __post_init__(self):
        if self.accepted and self.metrics is None:
            raise ValueError("accepted records need metrics")
        if not self.accepted and self.rejection_reason is None:
            raise ValueError("rejected records need a rejection_reason")

    def to_json_line(self) -> str:
        obj: dict = {"step": self.step, "accepted": self.accepted}
        if self.accepted:
            obj["metrics"] = self.metrics.to_dict()
        else:
            obj["rejection_reason"] = self.rejection_reason.value
        return json.dumps(obj, separators=(",", ":"), sort_keys=True)

    @classmethod
    def from_json_line(cls, line: str) -> "StepRecord":
        obj = json.loads(line)
        if obj["accepted"]:
            return cls(step=obj["step"], accepted=True,
                       metrics=PlanMetrics.from_dict(obj["metrics"]))
        return cls(step=obj["step"], accepted=False,
                   rejection_reason=RejectionReason(obj["rejection_reason"]))


class Chain:
    """One logical thread of chain state.

    records() yields record 0 (the seed plan's metrics), rejection records
    as they happen, and exactly config.steps accepted records. Multiple
    chains may run concurrently against the same shared graph and flows.
    """

    def __init__(self, config: ChainConfig, graph: UnitGraph, flows: FlowMatrix):
        self.config = config
        self.graph = graph
        self.flows = flows
        plan = config.initial_plan
        if plan.graph is not graph and plan.graph.digest() != graph.digest():
            raise InvalidSeedPlan("initial plan was built on a different graph")
        try:
            self._seed_metrics = score_plan(plan, graph, flows)
        except (ZeroInterFlows, DistrictFlowError) as exc:
            raise InvalidSeedPlan(f"seed plan is not scorable: {exc}") from exc
        self.partition = plan
        self.completed_steps = 0
        self.initial_cut_edges = cut_edge_count(plan)
        self._emitted_seed_record = False

    @property
    def cut_edge_bound(self) -> float:
        return self.config.compactness_multiplier * self.initial_cut_edges

    def _snapshot(self, step: int) -> dict[str, int] | None:
        every = self.config.record_assignments_every
        if every and step % every == 0:
            return dict(self.partition.assignment)
        return None

    def records(self) -> Iterator[StepRecord]:
        """Continue the run from the current state to config.steps.

        Each step holds one combined budget of max_tree_retries tree draws:
        balanced-cut retries and compactness rejections all spend from it."""
        cfg = self.config
        if not self._emitted_seed_record:
            self._emitted_seed_record = True
            yield StepRecord(step=0, accepted=True, metrics=self._seed_metrics,
                            assignment=self._snapshot(0))
        while self.completed_steps < cfg.steps:
            step = self.completed_steps + 1
            remaining = cfg.proposal.max_tree_retries
            attempt = 0
            while True:
                if remaining <= 0:
                    raise StepStalled(
                        f"step {step} spent its budget of "
                        f"{cfg.proposal.max_tree_retries} trees across cut "
                        f"retries and compactness rejections"
                    )
                rng = substream(cfg.seed, step, attempt)
                attempt += 1
                try:
                    candidate, used = propose_with_usage(
                        self.partition, self.graph, self.flows,
                        cfg.proposal, rng, budget=remaining)
                except RetriesExhausted:
                    remaining = 0
                    yield StepRecord(step=step, accepted=False,
                                     rejection_reason=RejectionReason.RETRIES_EXHAUSTED)
                    continue
                remaining -= used
                if cut_edge_count(candidate) > self.cut_edge_bound:
                    yield StepRecord(step=step, accepted=False,
                                     rejection_reason=RejectionReason.COMPACTNESS_BOUND)
                    continue
                self.partition = candidate
                self.completed_steps = step
                yield StepRecord(step=step, accepted=True,
                                 metrics=score_plan(candidate, self.graph, self.flows),
                                 assignment=self._snapshot(step))
                break

    def checkpoint(self, path) -> None:
        """Write the full chain state (graph and flows included) with an
        embedded content hash.

        The snapshot holds the last accepted state: a checkpoint taken while
        a step is still retrying resumes that step from its first attempt."""
        # the partition pickles whole so restored cache floats are bitwise
        # identical to the live ones; a scratch rebuild could drift by ulps
        payload = pickle.dumps(
            {
                "config": self.config,
                "graph": self.graph,
                "flows": self.flows,
                "partition": self.partition,
                "completed_steps": self.completed_steps,
                "initial_cut_edges": self.initial_cut_edges,
                "emitted_seed_record": self._emitted_seed_record,
            },
            protocol=4,
        )
        digest = hashlib.sha256(payload).hexdigest().encode()
        with open(path, "wb") as fh:
            fh.write(_CHECKPOINT_MAGIC + digest + b"\n" + payload)

    @classmethod
    def restore(cls, path) -> "Chain":
        """Rebuild a chain that will produce the identical future record
        stream as the uninterrupted run."""
        with open(path, "rb") as fh:
            blob = fh.read()
        if not blob.startswith(_CHECKPOINT_MAGIC):
            raise CorruptCheckpoint("not a chain checkpoint file")
        rest = blob[len(_CHECKPOINT_MAGIC):]
        digest, sep, payload = rest.partition(b"\n")
        if not sep or hashlib.sha256(payload).hexdigest().encode() != digest:
            raise CorruptCheckpoint("checkpoint content hash mismatch")
        state = pickle.loads(payload)

        chain = cls.__new__(cls)
        chain.config = state["config"]
        chain.graph = state["graph"]
        chain.flows = state["flows"]
        chain.partition = state["partition"]
        chain.completed_steps = state["completed_steps"]
        chain.initial_cut_edges = state["initial_cut_edges"]
        chain._emitted_seed_record = state["emitted_seed_record"]
        chain._seed_metrics = score_plan(chain.config.initial_plan, chain.graph, chain.flows)
        return chain

    def state_hash(self) -> str:
        payload = json.dumps(
            {
                "assignment": sorted(self.partition.assignment.items()),
                "completed_steps": self.completed_steps,
                "config": self.config.digest(),
            },
            separators=(",", ":"), sort_keys=True,
        ).encode()
        return hashlib.sha256(payload).hexdigest()


def run_chain(config: ChainConfig, graph: UnitGraph, flows: FlowMatrix) -> Iterator[StepRecord]:
    """Run a fresh chain to completion, yielding its record stream."""
    yield from Chain(config, graph, flows).records()


def write_records_jsonl(records, path) -> list[StepRecord]:
    """Persist a record stream as JSON Lines; returns the records written."""
    out = []
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(rec.to_json_line() + "\n")
            out.append(rec)
    return out


def read_records_jsonl(path) -> list[StepRecord]:
    with open(path, encoding="utf-8") as fh:
        return [StepRecord.from_json_line(line) for line in fh if line.strip()]
