from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from districtflow.analysis import (
    Ensemble,
    compare_ensembles,
    ks_two_sample,
    point_cloud,
    seat_bands,
    summarize,
)
from districtflow.chain import StepRecord
from districtflow.errors import DigestMismatch, EmptySample, UnknownField
from districtflow.metrics import PlanMetrics
from districtflow.rng import substream

from oracles import ks_statistic_grid, summary_by_sorting


def make_metrics(ir=1.0, eg=0.0, pp=0.5, seats=(2, 2), cut_edges=10):
    k = seats[0] + seats[1]
    return PlanMetrics(
        ir=ir, normalized_ir=ir / (1 + ir), mean_polsby_popper=pp,
        per_district_pp=tuple(pp for _ in range(k)),
        efficiency_gap=eg, per_district_eg=tuple(eg / k for _ in range(k)),
        seats_dem=seats[0], seats_rep=seats[1],
        intra_flows=ir * 100.0, inter_flows=100.0, cut_edges=cut_edges,
    )


def make_ensemble(label, metrics_list, graph_digest="g", flow_digest="f"):
    records = tuple(
        StepRecord(step=i, accepted=True, metrics=m)
        for i, m in enumerate(metrics_list)
    )
    return Ensemble(label=label, records=records,
                    graph_digest=graph_digest, flow_digest=flow_digest)


class TestSummarize:
    def test_constant_ensemble(self):
        ens = make_ensemble("c", [make_metrics(ir=2.5)] * 10)
        s = summarize(ens, "ir")
        assert s.min == s.max == s.mean == s.median == 2.5

    def test_linear_interpolation_quartiles(self):
        ens = make_ensemble("q", [make_metrics(ir=v) for v in (1.0, 2.0, 3.0, 4.0)])
        s = summarize(ens, "ir")
        assert s.median == pytest.approx(2.5)
        assert s.q1 == pytest.approx(1.75)
        assert s.q3 == pytest.approx(3.25)

    def test_thousand_values_match_sort_oracle(self):
        rng = substream(211, 0)
        values = [float(v) for v in rng.random(1000) * 7.0]
        ens = make_ensemble("r", [make_metrics(ir=v) for v in values])
        s = summarize(ens, "ir")
        o_min, o_max, o_mean, o_median, o_q1, o_q3 = summary_by_sorting(values)
        assert s.min == pytest.approx(o_min, rel=1e-12)
        assert s.max == pytest.approx(o_max, rel=1e-12)
        assert s.mean == pytest.approx(o_mean, rel=1e-12)
        assert s.median == pytest.approx(o_median, rel=1e-12)
        assert s.q1 == pytest.approx(o_q1, rel=1e-12)
        assert s.q3 == pytest.approx(o_q3, rel=1e-12)
        assert s.min <= s.median <= s.max

    def test_unknown_field_rejected(self):
        ens = make_ensemble("x", [make_metrics()])
        with pytest.raises(UnknownField):
            summarize(ens, "no_such_metric")


class TestKSTwoSample:
    def test_identical_samples_have_zero_statistic(self):
        rng = substream(223, 0)
        a = rng.random(50)
        result = ks_two_sample(a, a.copy())
        assert result.statistic == 0.0
        assert result.p_value == pytest.approx(1.0)

    def test_disjoint_supports_have_statistic_one(self):
        result = ks_two_sample([1.0, 2.0, 3.0], [10.0, 11.0])
        assert result.statistic == 1.0
        assert result.n1 == 3 and result.n2 == 2

    def test_matches_grid_oracle(self):
        rng = substream(227, 0)
        a = rng.normal(0.0, 1.0, 200)
        b = rng.normal(0.4, 1.3, 200)
        result = ks_two_sample(a, b)
        assert result.statistic == pytest.approx(
            ks_statistic_grid(a.tolist(), b.tolist()), abs=1e-12)

    def test_statistic_matches_scipy_and_pvalue_matches_series(self):
        import math

        from scipy.stats import ks_2samp

        rng = substream(229, 0)
        a = rng.random(150)
        b = rng.random(180) ** 1.3
        ours = ks_two_sample(a, b)
        assert ours.statistic == pytest.approx(
            ks_2samp(a, b, method="asymp").statistic, abs=1e-12)

        # independent evaluation of the alternating Kolmogorov series
        en = ours.n1 * ours.n2 / (ours.n1 + ours.n2)
        y = math.sqrt(en) * ours.statistic
        series = 2.0 * sum(
            (-1) ** (r - 1) * math.exp(-2.0 * r * r * y * y) for r in range(1, 101)
        )
        assert ours.p_value == pytest.approx(series, abs=1e-12)

    def test_heavily_tied_integer_samples_match_grid_oracle(self):
        # cut-edge counts produce many ties; the sup distance must still be
        # exact at the shared jump points
        rng = substream(231, 0)
        a = rng.integers(10, 16, 300).astype(float)
        b = rng.integers(12, 18, 240).astype(float)
        result = ks_two_sample(a, b)
        assert result.statistic == pytest.approx(
            ks_statistic_grid(a.tolist(), b.tolist()), abs=1e-12)

    def test_symmetry(self):
        rng = substream(233, 0)
        a, b = rng.random(30), rng.random(45)
        x, y = ks_two_sample(a, b), ks_two_sample(b, a)
        assert x.statistic == y.statistic
        assert x.p_value == y.p_value

    @given(st.lists(st.floats(min_value=0.1, max_value=50.0), min_size=3, max_size=40),
           st.lists(st.floats(min_value=0.1, max_value=50.0), min_size=3, max_size=40))
    @settings(max_examples=40, deadline=None)
    def test_invariant_under_monotone_transform(self, a, b):
        base = ks_two_sample(a, b).statistic
        transformed = ks_two_sample([x ** 3 for x in a], [x ** 3 for x in b]).statistic
        assert transformed == pytest.approx(base, abs=1e-12)

    def test_empty_sample_rejected(self):
        with pytest.raises(EmptySample):
            ks_two_sample([], [1.0])


class TestSeatBands:
    def test_single_band(self):
        ens = make_ensemble("one", [make_metrics(seats=(4, 4))] * 12)
        bands = seat_bands(ens)
        assert len(bands) == 1
        assert bands[0].count == 12
        assert (bands[0].seats_dem, bands[0].seats_rep) == (4, 4)

    def test_hand_built_six_record_ensemble(self):
        spec = [((3, 5), -0.06), ((4, 4), -0.01), ((4, 4), 0.03),
                ((5, 3), 0.08), ((3, 5), -0.10), ((4, 4), 0.01)]
        ens = make_ensemble("hand", [make_metrics(seats=s, eg=e) for s, e in spec])
        bands = seat_bands(ens)
        assert [(b.seats_dem, b.seats_rep, b.count) for b in bands] == [
            (3, 5, 2), (4, 4, 3), (5, 3, 1)]
        by_key = {(b.seats_dem, b.seats_rep): b.mean_efficiency_gap for b in bands}
        assert by_key[(3, 5)] == pytest.approx((-0.06 - 0.10) / 2)
        assert by_key[(4, 4)] == pytest.approx((-0.01 + 0.03 + 0.01) / 3)
        assert by_key[(5, 3)] == pytest.approx(0.08)

    def test_random_ensemble_matches_group_by_oracle(self):
        rng = substream(239, 0)
        metrics = [
            make_metrics(seats=(int(d), 8 - int(d)), eg=float(e))
            for d, e in zip(rng.integers(2, 7, 300), rng.normal(0, 0.05, 300))
        ]
        ens = make_ensemble("rand", metrics)
        bands = seat_bands(ens)

        groups: dict = {}
        for m in metrics:
            groups.setdefault((m.seats_dem, m.seats_rep), []).append(m.efficiency_gap)
        assert len(bands) == len(groups)
        for band in bands:
            egs = groups[(band.seats_dem, band.seats_rep)]
            assert band.count == len(egs)
            assert band.mean_efficiency_gap == pytest.approx(sum(egs) / len(egs))
        assert sum(b.count for b in bands) == len(ens.records)
        assert [b.seats_dem for b in bands] == sorted(b.seats_dem for b in bands)


class TestPointCloud:
    def test_single_record(self):
        m = make_metrics(ir=2.0, eg=-0.04, pp=0.61)
        rows = point_cloud([make_ensemble("solo", [m])])
        assert rows[0] == ["compactness", "efficiency_gap", "ir", "ensemble"]
        assert rows[1] == [0.61, -0.04, 2.0, "solo"]

    def test_concatenates_with_labels(self):
        a = make_ensemble("a", [make_metrics()] * 10)
        b = make_ensemble("b", [make_metrics()] * 20)
        rows = point_cloud([a, b])
        assert len(rows) == 31
        assert sum(1 for r in rows[1:] if r[3] == "a") == 10
        assert sum(1 for r in rows[1:] if r[3] == "b") == 20

    def test_rows_match_record_fields(self):
        rng = substream(241, 0)
        metrics = [make_metrics(ir=float(i), eg=float(e), pp=float(p))
                   for i, e, p in zip(rng.random(100) * 4,
                                      rng.normal(0, 0.1, 100),
                                      rng.random(100))]
        ens = make_ensemble("m", metrics)
        rows = point_cloud([ens])[1:]
        for row, m in zip(rows, metrics):
            assert row == [m.mean_polsby_popper, m.efficiency_gap, m.ir, "m"]


class TestDigestGuards:
    def test_mismatched_inputs_refuse_to_combine(self):
        a = make_ensemble("a", [make_metrics()], graph_digest="g1")
        b = make_ensemble("b", [make_metrics()], graph_digest="g2")
        with pytest.raises(DigestMismatch):
            compare_ensembles(a, b, "ir")
        with pytest.raises(DigestMismatch):
            point_cloud([a, b])

    def test_matching_inputs_compare(self):
        a = make_ensemble("a", [make_metrics(ir=v) for v in (1.0, 2.0)])
        b = make_ensemble("b", [make_metrics(ir=v) for v in (1.5, 2.5)])
        result = compare_ensembles(a, b, "ir")
        assert 0.0 <= result.statistic <= 1.0
