from __future__ import annotations

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jumpsync.evalmetrics import EvalSummary, TrialEval, difference_in_errors, summarize


class TestDifferenceInErrors:
    def test_perfect_detection_gives_zero(self):
        assert difference_in_errors(TrialEval(10, 20, 10, 20)) == 0.0

    def test_shared_bias_cancels(self):
        # both views late by 3: still perfectly synchronized
        assert difference_in_errors(TrialEval(13, 23, 10, 20)) == 0.0

    def test_opposite_errors_add(self):
        # errors +2 and -1 -> |2 - (-1)| = 3
        assert difference_in_errors(TrialEval(12, 19, 10, 20)) == 3.0

    def test_negative_index_rejected(self):
        with pytest.raises(ValueError):
            TrialEval(-1, 0, 0, 0)

    @given(
        da=st.integers(0, 500),
        db=st.integers(0, 500),
        ta=st.integers(0, 500),
        tb=st.integers(0, 500),
        bias=st.integers(0, 100),
    )
    @settings(max_examples=100)
    def test_common_temporal_bias_cancels(self, da, db, ta, tb, bias):
        base = difference_in_errors(TrialEval(da, db, ta, tb))
        shifted = difference_in_errors(TrialEval(da + bias, db + bias, ta + bias, tb + bias))
        assert base == shifted


class TestSummarize:
    def test_all_zero_trials(self):
        trials = [TrialEval(5, 5, 5, 5) for _ in range(10)]
        summary = summarize(trials)
        assert summary.mean == 0.0 and summary.sd == 0.0

    def test_values_0_and_2_give_1_and_sqrt2(self):
        trials = [TrialEval(10, 10, 10, 10), TrialEval(12, 10, 10, 10)]
        summary = summarize(trials)
        assert summary.per_trial == (0.0, 2.0)
        assert abs(summary.mean - 1.0) < 1e-12
        assert abs(summary.sd - math.sqrt(2.0)) < 1e-12

    def test_sample_sd_uses_n_minus_1(self):
        trials = [
            TrialEval(11, 10, 10, 10),
            TrialEval(13, 10, 10, 10),
            TrialEval(15, 10, 10, 10),
        ]
        summary = summarize(trials)
        # per-trial 1, 3, 5 -> mean 3, sample variance ((4 + 0 + 4) / 2) = 4
        assert abs(summary.mean - 3.0) < 1e-12
        assert abs(summary.sd - 2.0) < 1e-12

    def test_fewer_than_two_trials_rejected(self):
        with pytest.raises(ValueError, match="at least 2"):
            summarize([TrialEval(0, 0, 0, 0)])

    @given(
        st.lists(
            st.tuples(st.integers(0, 99), st.integers(0, 99), st.integers(0, 99), st.integers(0, 99)),
            min_size=2,
            max_size=12,
        )
    )
    @settings(max_examples=60)
    def test_mean_lies_within_per_trial_bounds(self, rows):
        trials = [TrialEval(*r) for r in rows]
        summary = summarize(trials)
        assert min(summary.per_trial) - 1e-12 <= summary.mean <= max(summary.per_trial) + 1e-12

    def test_summary_is_plain_data(self):
        summary = summarize([TrialEval(0, 0, 0, 0), TrialEval(2, 0, 0, 0)])
        assert isinstance(summary, EvalSummary)
        assert isinstance(summary.per_trial, tuple)
