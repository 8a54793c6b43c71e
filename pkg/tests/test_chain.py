from __future__ import annotations

import pytest

from districtflow.chain import (
    Chain,
    ChainConfig,
    RejectionReason,
    StepRecord,
    read_records_jsonl,
    run_chain,
    write_records_jsonl,
)
from districtflow.errors import CorruptCheckpoint, InvalidSeedPlan, StepStalled
from districtflow.graph import Partition, cut_edge_count
from districtflow.metrics import score_plan
from districtflow.recom import Method, ProposalConfig, seed_plan

from oracles import all_contiguous, brute_force_ir, recount_cut_edges
from test_recom import line_graph


def chain_config(plan, steps, *, seed=42, multiplier=2.0, epsilon=0.03,
                 method=Method.RST, bias=None, every=0, retries=10_000):
    return ChainConfig(
        proposal=ProposalConfig(method=method, bias=bias, epsilon=epsilon,
                                max_tree_retries=retries),
        steps=steps, compactness_multiplier=multiplier, seed=seed,
        initial_plan=plan, record_assignments_every=every,
    )


class TestRunChain:
    def test_single_step_emits_seed_and_one_accepted(self, grid44, grid44_plan):
        graph, flows = grid44
        records = list(run_chain(chain_config(grid44_plan, 1), graph, flows))
        accepted = [r for r in records if r.accepted]
        assert accepted[0].step == 0
        assert accepted[-1].step == 1
        assert sum(1 for r in accepted if r.step >= 1) == 1
        assert accepted[-1].metrics.inter_flows > 0

    def test_record_zero_is_seed_plan_metrics(self, grid44, grid44_plan):
        graph, flows = grid44
        records = list(run_chain(chain_config(grid44_plan, 1), graph, flows))
        assert records[0].step == 0
        assert records[0].metrics == score_plan(grid44_plan, graph, flows)

    def test_same_seed_reproduces_stream(self, grid44, grid44_plan):
        graph, flows = grid44
        lines = [
            [r.to_json_line() for r in run_chain(chain_config(grid44_plan, 40), graph, flows)]
            for _ in range(2)
        ]
        assert lines[0] == lines[1]

    def test_validators_hold_over_run(self, grid66, grid66_plan4):
        graph, flows = grid66
        config = chain_config(grid66_plan4, 300, multiplier=1.0, every=100)
        bound = cut_edge_count(grid66_plan4)
        ideal = graph.total_population / 4

        snapshots = {}
        accepted = 0
        for rec in run_chain(config, graph, flows):
            if not rec.accepted:
                assert rec.rejection_reason is not None
                continue
            accepted += 1
            assert rec.metrics.cut_edges <= bound
            if rec.assignment is not None:
                snapshots[rec.step] = rec.assignment
        assert accepted == config.steps + 1  # record 0 plus the steps

        assert set(snapshots) == {0, 100, 200, 300}
        for step, assignment in snapshots.items():
            assert all_contiguous(assignment, graph.neighbors)
            assert recount_cut_edges(assignment, graph.edges) <= bound
            rebuilt = Partition.from_assignment(graph, flows, assignment, 4)
            assert all(
                ideal * (1 - 0.015) <= p <= ideal * (1 + 0.015)
                for p in rebuilt.population
            )

    def test_cached_flow_sums_match_recompute(self, grid66, grid66_plan4):
        graph, flows = grid66
        config = chain_config(grid66_plan4, 200, multiplier=1.5, every=50)
        for rec in run_chain(config, graph, flows):
            if rec.accepted and rec.assignment is not None:
                intra, inter = brute_force_ir(rec.assignment, flows.entries)
                assert rec.metrics.intra_flows == pytest.approx(intra, rel=1e-9)
                assert rec.metrics.inter_flows == pytest.approx(inter, rel=1e-9)

    def test_rejections_never_mutate_state(self, grid66, grid66_plan4):
        graph, flows = grid66
        chain = Chain(chain_config(grid66_plan4, 150, multiplier=1.0), graph, flows)
        saw_rejection = False
        held = chain.partition
        for rec in chain.records():
            if rec.accepted:
                held = chain.partition
            else:
                saw_rejection = True
                assert chain.partition is held
        assert saw_rejection, "multiplier 1.0 should force some rejections"

    def test_stalled_step_raises_after_budget_spent(self):
        # districts of 1.5 are impossible with unit pops, so every tree draw
        # fails; the step burns its combined budget and stalls
        graph, flows = line_graph(3)
        plan = Partition.from_assignment(graph, flows, {"p0": 1, "p1": 1, "p2": 2})
        config = chain_config(plan, 1, epsilon=0.1, multiplier=5.0, retries=5)
        records = []
        with pytest.raises(StepStalled):
            for rec in run_chain(config, graph, flows):
                records.append(rec)
        rejections = [r for r in records if not r.accepted]
        assert rejections
        assert all(r.rejection_reason is RejectionReason.RETRIES_EXHAUSTED
                   for r in rejections)

    def test_unscorable_seed_plan_rejected(self, path4):
        graph, flows = path4
        plan = Partition.from_assignment(graph, flows, {n: 1 for n in graph.nodes})
        with pytest.raises(InvalidSeedPlan):
            Chain(chain_config(plan, 1), graph, flows)


class TestStepRecord:
    def test_accepted_needs_metrics(self):
        with pytest.raises(ValueError):
            StepRecord(step=1, accepted=True)

    def test_rejection_needs_reason(self):
        with pytest.raises(ValueError):
            StepRecord(step=1, accepted=False)

    def test_jsonl_roundtrip(self, grid44, grid44_plan, tmp_path):
        graph, flows = grid44
        records = list(run_chain(chain_config(grid44_plan, 10), graph, flows))
        path = tmp_path / "records.jsonl"
        write_records_jsonl(records, path)
        loaded = read_records_jsonl(path)
        assert [r.to_json_line() for r in loaded] == [r.to_json_line() for r in records]


class TestCheckpoint:
    def test_restore_continues_identical_stream(self, grid44, grid44_plan, tmp_path):
        graph, flows = grid44
        config = chain_config(grid44_plan, 200, seed=7, multiplier=2.0)

        full = [r.to_json_line() for r in run_chain(config, graph, flows)]

        chain = Chain(config, graph, flows)
        gen = chain.records()
        head = []
        while chain.completed_steps < 100:
            head.append(next(gen).to_json_line())
        ckpt = tmp_path / "chain.ckpt"
        chain.checkpoint(ckpt)
        tail_original = [r.to_json_line() for r in gen]

        restored = Chain.restore(ckpt)
        assert restored.completed_steps == 100
        tail_restored = [r.to_json_line() for r in restored.records()]

        assert tail_restored == tail_original
        assert head + tail_original == full

    def test_restore_identical_under_heavy_rejection(self, grid66, grid66_plan4, tmp_path):
        # multiplier 1.0 forces frequent compactness rejections; the restored
        # stream must still reproduce the uninterrupted accepted records
        graph, flows = grid66
        config = chain_config(grid66_plan4, 120, seed=13, multiplier=1.0)
        full = [r.to_json_line() for r in run_chain(config, graph, flows)]

        chain = Chain(config, graph, flows)
        gen = chain.records()
        head = []
        while chain.completed_steps < 60:
            head.append(next(gen).to_json_line())
        ckpt = tmp_path / "mid.ckpt"
        chain.checkpoint(ckpt)
        tail = [r.to_json_line() for r in Chain.restore(ckpt).records()]
        assert head + tail == full

    def test_truncated_file_is_corrupt(self, grid44, grid44_plan, tmp_path):
        graph, flows = grid44
        chain = Chain(chain_config(grid44_plan, 5), graph, flows)
        ckpt = tmp_path / "chain.ckpt"
        chain.checkpoint(ckpt)
        blob = ckpt.read_bytes()
        ckpt.write_bytes(blob[: len(blob) - 20])
        with pytest.raises(CorruptCheckpoint):
            Chain.restore(ckpt)

    def test_roundtrip_without_steps_preserves_state_hash(self, grid44, grid44_plan, tmp_path):
        graph, flows = grid44
        chain = Chain(chain_config(grid44_plan, 5), graph, flows)
        ckpt = tmp_path / "chain.ckpt"
        chain.checkpoint(ckpt)
        assert Chain.restore(ckpt).state_hash() == chain.state_hash()
