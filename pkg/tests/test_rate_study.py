"""Tests for the nested-grid convergence studies (small, fast configurations;
the full-scale runs live in the acceptance suite)."""

import csv
import io
import math

import numpy as np
import pytest

from piterbarg import (
    Domain,
    EstimatorConfig,
    piterbarg_bm_half,
    rate_points_csv,
    run_gap_decay,
    run_rate_study_bm,
)
from piterbarg.budget import plan_horizon
from piterbarg.estimator import _simulate_functionals
from piterbarg.rate_study import RATE_CSV_HEADER, _nested_strides


class TestNestedValidation:
    def test_accepts_power_of_two_ladder(self):
        deltas, strides = _nested_strides([0.04, 0.01, 0.0025])
        assert strides == [16, 4, 1]

    def test_rejects_non_nested(self):
        with pytest.raises(ValueError):
            _nested_strides([0.01, 0.003])

    def test_rejects_non_descending(self):
        with pytest.raises(ValueError):
            _nested_strides([0.01, 0.04])
        with pytest.raises(ValueError):
            _nested_strides([0.01, 0.01])

    def test_rejects_short_or_nonpositive(self):
        with pytest.raises(ValueError):
            _nested_strides([0.01])
        with pytest.raises(ValueError):
            _nested_strides([0.04, -0.01])


class TestRateStudyBm:
    def test_small_study_structure(self):
        points = run_rate_study_bm(d=2.0, domain=Domain.HALF_LINE,
                                   deltas=[0.2, 0.05], replications=2000,
                                   seed=12, threads=2)
        assert [p.delta for p in points] == [0.2, 0.05]
        exact = piterbarg_bm_half(2.0)
        for p in points:
            assert p.p_hat >= 1.0
            assert p.gap == exact - p.p_hat
            assert p.gap_stderr == p.stderr
            assert p.empirical_rate == pytest.approx(
                p.gap / (math.sqrt(p.delta) * p.p_hat), rel=1e-15
            )
        # finer grid dominates pathwise, so its mean is >= the coarser one
        # and the gap shrinks with delta
        assert points[1].p_hat >= points[0].p_hat
        assert points[1].gap <= points[0].gap

    def test_pathwise_domination_under_crn(self):
        cfg = EstimatorConfig(alpha=1.0, d=2.0, domain=Domain.HALF_LINE,
                              delta=0.05, horizon=plan_horizon(0.05, 1.0),
                              replications=500, seed=9)
        table = _simulate_functionals(cfg, strides=[4, 2, 1])
        assert np.all(table[:, 0] <= table[:, 1])
        assert np.all(table[:, 1] <= table[:, 2])

    def test_invalid_penalty_rejected(self):
        with pytest.raises(ValueError):
            run_rate_study_bm(d=0.0, domain=Domain.HALF_LINE,
                              deltas=[0.2, 0.05], replications=10, seed=1)

    def test_non_nested_rejected(self):
        with pytest.raises(ValueError):
            run_rate_study_bm(d=2.0, domain=Domain.HALF_LINE,
                              deltas=[0.01, 0.003], replications=10, seed=1)


class TestGapDecay:
    def test_small_study(self):
        result = run_gap_decay(alpha=0.5, d=2.0, domain=Domain.HALF_LINE,
                               deltas=[0.4, 0.2, 0.1], replications=800,
                               seed=21, threads=2)
        assert result.finest_delta == 0.1
        assert [p.delta for p in result.points] == [0.4, 0.2]
        # paired CRN gaps are nonnegative by pathwise domination and the
        # coarser grid loses at least as much as the finer one
        assert result.points[0].gap >= result.points[1].gap >= 0.0
        assert all(p.gap_stderr >= 0.0 for p in result.points)
        assert math.isfinite(result.exponent)

    def test_full_line_runs(self):
        result = run_gap_decay(alpha=1.5, d=2.0, domain=Domain.FULL_LINE,
                               deltas=[0.4, 0.1], replications=300, seed=2)
        assert len(result.points) == 1
        assert result.points[0].gap >= 0.0

    def test_brownian_alpha_rejected(self):
        with pytest.raises(ValueError):
            run_gap_decay(alpha=1.0, d=2.0, domain=Domain.HALF_LINE,
                          deltas=[0.4, 0.2], replications=10, seed=1)

    def test_exponent_regression_reported_with_stderr(self):
        result = run_gap_decay(alpha=0.5, d=2.0, domain=Domain.HALF_LINE,
                               deltas=[0.8, 0.4, 0.2, 0.1, 0.05],
                               replications=2000, seed=33, threads=2)
        assert math.isfinite(result.exponent)
        assert math.isfinite(result.exponent_stderr)
        assert result.exponent_stderr >= 0.0
        # decay exponent should be broadly compatible with the alpha/2 shape;
        # generous range since this is a tiny pilot-scale run
        assert 0.05 < result.exponent < 1.2


class TestCsvOutput:
    def test_round_trips_through_csv_reader(self):
        points = run_rate_study_bm(d=2.0, domain=Domain.HALF_LINE,
                                   deltas=[0.2, 0.05], replications=500, seed=4)
        text = rate_points_csv(points)
        rows = list(csv.reader(io.StringIO(text)))
        assert ",".join(rows[0]) == RATE_CSV_HEADER
        assert len(rows) == 1 + len(points)
        parsed = [float(x) for x in rows[1]]
        assert parsed[0] == points[0].delta
        assert parsed[1] == points[0].p_hat  # repr floats are bit-exact
        assert parsed[5] == points[0].empirical_rate
