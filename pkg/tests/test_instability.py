"""Concentration statistics: variance ratio, N-epsilon, and the t sweep."""

import numpy as np
import pytest

from isokernel.data import Dataset, gen_gaussians
from isokernel.experiments.instability import (
    instability_rows,
    n_epsilon,
    synth_queries,
    variance_ratio,
    vary_t_sweep,
)
from isokernel.kernel import IsolationKernel
from isokernel.measures import GaussianMeasure, IKMeasure, LpMeasure


class TestSynthQueries:
    def test_midpoint_and_sparse_center(self):
        a = np.array([[0.0, 0.0], [0.2, 0.0]])  # tight pair
        b = np.array([[10.0, 0.0], [14.0, 0.0]])  # loose pair
        ds = Dataset("x", np.vstack([a, b]), np.array([0, 0, 1, 1]))
        q_between, q_sparse = synth_queries(ds)
        assert np.allclose(q_between, [(0.1 + 12.0) / 2.0, 0.0])
        assert np.allclose(q_sparse, [12.0, 0.0])

    def test_equal_spreads_pick_the_first_cluster(self):
        a = np.array([[0.0], [1.0]])
        b = np.array([[10.0], [11.0]])
        ds = Dataset("x", np.vstack([a, b]), np.array([0, 0, 1, 1]))
        _, q_sparse = synth_queries(ds)
        assert q_sparse[0] == 0.5

    def test_requires_exactly_two_clusters(self):
        ds = Dataset("x", np.zeros((3, 1)), np.array([0, 1, 2]))
        with pytest.raises(ValueError, match="two clusters required, got 3"):
            synth_queries(ds)
        with pytest.raises(ValueError, match="requires a labeled dataset"):
            synth_queries(Dataset("x", np.zeros((3, 1))))


class TestVarianceRatio:
    def test_zero_mean_dissimilarity_is_an_error(self):
        q = np.array([1.0, 2.0])
        ds = Dataset("dup", np.vstack([q, q, q]))
        with pytest.raises(ValueError, match="zero mean dissimilarity"):
            variance_ratio(LpMeasure(2), ds, q)

    def test_matches_direct_computation(self):
        ds = Dataset("x", np.array([[0.0], [1.0], [3.0]]))
        got = variance_ratio(LpMeasure(2), ds, np.array([2.0]))
        m = np.array([2.0, 1.0, 1.0])
        assert np.isclose(got, np.var(m / m.mean()))

    def test_empty_dataset(self):
        with pytest.raises(ValueError, match="empty dataset"):
            variance_ratio(LpMeasure(2), Dataset("x", np.zeros((0, 1))), np.array([0.0]))


class TestNEpsilon:
    def test_counts_near_ties_of_the_minimum(self):
        ds = Dataset("x", np.array([[1.0], [1.004], [1.006], [2.0]]))
        q = np.array([0.0])
        assert n_epsilon(LpMeasure(2), ds, q, 0.005) == 2
        assert n_epsilon(LpMeasure(2), ds, q, 0.0061) == 3

    def test_zero_minimum_counts_only_exact_zeros(self):
        q = np.array([1.0])
        ds = Dataset("x", np.vstack([q, q, [[1.5]]]))
        assert n_epsilon(LpMeasure(2), ds, q, 0.005) == 2

    def test_epsilon_must_be_positive(self):
        ds = Dataset("x", np.array([[1.0]]))
        with pytest.raises(ValueError, match="epsilon must be positive"):
            n_epsilon(LpMeasure(2), ds, np.array([0.0]), 0.0)


class TestInstabilityRows:
    def test_one_row_per_measure_and_query_kind(self):
        ds = gen_gaussians(6, 25, seed=0)
        model = IsolationKernel(psi=4, t=50, seed=0).fit(ds.points)
        rows = instability_rows(
            ds, [IKMeasure(model), GaussianMeasure(5.0)], epsilon=0.01, seed=3
        )
        assert [(r.measure, r.query_kind) for r in rows] == [
            ("IK", "between_clusters"),
            ("IK", "sparse_center"),
            ("GK", "between_clusters"),
            ("GK", "sparse_center"),
        ]
        assert all(r.d == 6 and r.epsilon == 0.01 and r.seed == 3 for r in rows)
        assert all(r.n_epsilon >= 1 and r.variance_ratio >= 0.0 for r in rows)


class TestVaryTSweep:
    def test_unknown_source(self):
        ds = gen_gaussians(4, 10, seed=0)
        with pytest.raises(ValueError, match="unknown partition source 'grid'"):
            vary_t_sweep(ds, np.zeros(4), 2, [1], source="grid")

    def test_empty_t_values(self):
        ds = gen_gaussians(4, 10, seed=0)
        with pytest.raises(ValueError, match="t_values must be nonempty"):
            vary_t_sweep(ds, np.zeros(4), 2, [])

    def test_single_trial_has_zero_stderr(self):
        ds = gen_gaussians(4, 15, seed=0)
        q = synth_queries(ds)[1]
        rows = vary_t_sweep(ds, q, 2, [3], trials=1, seed=0)
        assert rows[0].stderr == 0.0 and rows[0].trials == 1

    def test_more_partitionings_shrink_the_near_tie_count(self):
        ds = gen_gaussians(1000, 100, seed=0)
        q = synth_queries(ds)[1]
        rows = vary_t_sweep(ds, q, 8, [1, 50], trials=5, seed=0)
        assert rows[0].t == 1 and rows[1].t == 50
        assert rows[1].mean_n_eps < rows[0].mean_n_eps

    def test_uniform_source_and_determinism(self):
        ds = gen_gaussians(8, 20, seed=0)
        q = synth_queries(ds)[1]
        a = vary_t_sweep(ds, q, 4, [2, 5], trials=3, source="uniform", seed=2)
        b = vary_t_sweep(ds, q, 4, [2, 5], trials=3, source="uniform", seed=2)
        assert [(r.t, r.mean_n_eps, r.stderr) for r in a] == [
            (r.t, r.mean_n_eps, r.stderr) for r in b
        ]
        assert all(r.source == "uniform" for r in a)
