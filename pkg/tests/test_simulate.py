"""Conjugate Bayesian updating and uncertainty learning curves."""

import numpy as np
import pytest

import oracles as oc
from secondorder import (
    BayesState,
    Categorical,
    DimensionMismatch,
    Dirichlet,
    InvalidSpec,
    bayes_update,
    decompose,
    learning_curve,
)


class TestBayesState:
    def test_construction(self):
        state = BayesState([1.0, 1.0])
        assert state.k == 2
        np.testing.assert_array_equal(state.counts, [1.0, 1.0])

    def test_uniform_prior(self):
        np.testing.assert_array_equal(BayesState.uniform_prior(4).counts, np.ones(4))

    def test_rejects_non_positive_counts(self):
        with pytest.raises(InvalidSpec):
            BayesState([1.0, 0.0])

    def test_posterior_is_dirichlet(self):
        assert isinstance(BayesState([2.0, 3.0]).posterior(), Dirichlet)


class TestBayesUpdate:
    def test_increment_first_outcome(self):
        state = bayes_update(BayesState([1, 1]), 0)
        np.testing.assert_array_equal(state.counts, [2.0, 1.0])

    def test_increment_second_outcome(self):
        state = bayes_update(BayesState([2, 3]), 1)
        np.testing.assert_array_equal(state.counts, [2.0, 4.0])

    def test_original_state_unchanged(self):
        state = BayesState([1, 1])
        bayes_update(state, 0)
        np.testing.assert_array_equal(state.counts, [1.0, 1.0])

    def test_updates_commute(self):
        outcomes = [0, 1, 1, 0, 1, 2, 2, 0]
        state_a = BayesState([1, 1, 1])
        for outcome in outcomes:
            state_a = bayes_update(state_a, outcome)
        state_b = BayesState([1, 1, 1])
        for outcome in reversed(outcomes):
            state_b = bayes_update(state_b, outcome)
        np.testing.assert_array_equal(state_a.counts, state_b.counts)

    def test_out_of_range(self):
        with pytest.raises(IndexError):
            bayes_update(BayesState([1, 1]), 2)
        with pytest.raises(IndexError):
            bayes_update(BayesState([1, 1]), -1)


class TestLearningCurve:
    def test_start_point_is_prior_decomposition(self):
        # independent of theta* and seed: n = 0 sees no data
        for theta_star, seed in [((0.3, 0.7), 1), ((0.9, 0.1), 99)]:
            curve = learning_curve(
                Categorical(theta_star), schedule=(0, 1), replications=5, seed=seed
            )
            start = curve[0].triple
            assert start.total == 1.0
            assert start.aleatoric == pytest.approx(oc.FROZEN_UNIFORM01_ALEATORIC_BITS, abs=1e-12)
            assert start.epistemic == pytest.approx(oc.FROZEN_UNIFORM01_EPISTEMIC_BITS, abs=1e-12)

    def test_matches_direct_decomposition_at_zero(self):
        prior = BayesState([2.0, 5.0])
        curve = learning_curve(
            Categorical((0.5, 0.5)), prior=prior, schedule=(0,), replications=3, seed=0
        )
        direct = decompose(Dirichlet(prior.counts))
        assert curve[0].triple.total == pytest.approx(direct.total, abs=1e-12)
        assert curve[0].triple.aleatoric == pytest.approx(direct.aleatoric, abs=1e-12)

    def test_deterministic(self):
        args = dict(schedule=(0, 1, 5, 20), replications=8, seed=123)
        a = learning_curve(Categorical((0.3, 0.7)), **args)
        b = learning_curve(Categorical((0.3, 0.7)), **args)
        assert [(p.n, p.triple) for p in a] == [(p.n, p.triple) for p in b]

    def test_total_minus_epistemic_column(self):
        curve = learning_curve(Categorical((0.3, 0.7)), schedule=(0, 5), replications=4, seed=7)
        for point in curve:
            assert point.total_minus_epistemic == point.triple.total - point.triple.epistemic

    def test_schedule_must_start_at_zero(self):
        with pytest.raises(InvalidSpec):
            learning_curve(Categorical((0.3, 0.7)), schedule=(1, 2), replications=1, seed=0)

    def test_schedule_must_increase(self):
        with pytest.raises(InvalidSpec):
            learning_curve(Categorical((0.3, 0.7)), schedule=(0, 5, 5), replications=1, seed=0)

    def test_prior_dimension_checked(self):
        with pytest.raises(DimensionMismatch):
            learning_curve(
                Categorical((0.3, 0.7)), prior=BayesState([1, 1, 1]), replications=1, seed=0
            )

    def test_replications_positive(self):
        with pytest.raises(InvalidSpec):
            learning_curve(Categorical((0.3, 0.7)), schedule=(0,), replications=0, seed=0)

    def test_identity_holds_along_curve(self):
        curve = learning_curve(
            Categorical((0.2, 0.8)), schedule=(0, 2, 10, 50), replications=6, seed=3
        )
        for point in curve:
            t = point.triple
            assert abs(t.total - (t.aleatoric + t.epistemic)) <= max(
                2.0 * t.error_bound, 1e-9
            )

    def test_epistemic_shrinks_with_data(self):
        curve = learning_curve(
            Categorical((0.3, 0.7)), schedule=(0, 10, 100, 1000), replications=30, seed=11
        )
        epi = [p.triple.epistemic for p in curve]
        assert epi[-1] < 0.05
        assert all(b <= a + 0.01 for a, b in zip(epi, epi[1:]))

    def test_total_approaches_ground_truth_entropy(self):
        curve = learning_curve(
            Categorical((0.3, 0.7)), schedule=(0, 2000), replications=40, seed=13
        )
        assert abs(curve[-1].triple.total - oc.FROZEN_H_03_BITS) < 0.05

    def test_posterior_bounds_always_contain_true_entropy(self):
        # the support bounds of a Dirichlet posterior are [0, 1] normalized,
        # so the constant H(theta*) can never escape them
        from secondorder import aleatoric_bounds

        rng = np.random.default_rng(17)
        state = BayesState([1.0, 1.0])
        true_entropy = oc.FROZEN_H_03_BITS
        for _ in range(50):
            state = bayes_update(state, int(rng.random() > 0.3))
            b = aleatoric_bounds(state.posterior())
            assert b.lower <= true_entropy <= b.upper
