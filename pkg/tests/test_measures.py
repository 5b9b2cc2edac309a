"""Similarity / dissimilarity measures behind the shared bind/query protocol."""

import numpy as np
import pytest
import scipy.sparse as sp

from isokernel.kernel import IsolationKernel
from isokernel.measures import (
    AdaptiveGaussianMeasure,
    GaussianMeasure,
    IKMeasure,
    LinearMeasure,
    LpMeasure,
    SNNMeasure,
)


class TestGaussian:
    def test_known_value(self):
        X = np.array([[0.0], [1.0]])
        m = GaussianMeasure(1.0).bind(X).to_query([0.0])
        assert m[0] == 0.0
        assert np.isclose(m[1], 1.0 - np.exp(-1.0))

    def test_sigma_scales_the_falloff(self):
        X = np.array([[3.0]])
        near = GaussianMeasure(10.0).bind(X).to_query([0.0])[0]
        far = GaussianMeasure(1.0).bind(X).to_query([0.0])[0]
        assert near < far

    def test_pairwise_zero_diagonal_and_symmetry(self):
        X = np.random.default_rng(0).normal(size=(10, 3))
        D = GaussianMeasure(2.0).bind(X).pairwise()
        assert np.all(np.diag(D) == 0.0)
        # symmetric up to the last-ulp noise of the vectorized distance path
        assert np.allclose(D, D.T, rtol=0.0, atol=1e-12)

    def test_sigma_must_be_positive(self):
        with pytest.raises(ValueError, match="sigma"):
            GaussianMeasure(0.0)

    def test_name(self):
        assert GaussianMeasure(1.0).name == "GK"


class TestLinear:
    def test_cosine_dissimilarity(self):
        X = np.array([[1.0, 0.0], [0.0, 1.0], [2.0, 0.0], [-1.0, 0.0]])
        m = LinearMeasure().bind(X).to_query([1.0, 0.0])
        assert np.allclose(m, [0.0, 1.0, 0.0, 2.0])

    def test_zero_vectors_score_zero_similarity(self):
        X = np.array([[0.0, 0.0], [1.0, 0.0]])
        m = LinearMeasure().bind(X).to_query([0.0, 0.0])
        assert m.tolist() == [1.0, 1.0]

    def test_name(self):
        assert LinearMeasure().name == "LK"


class TestLp:
    def test_p2_matches_euclidean(self):
        X = np.random.default_rng(1).normal(size=(8, 4))
        q = np.zeros(4)
        m = LpMeasure(2).bind(X).to_query(q)
        assert np.allclose(m, np.linalg.norm(X, axis=1))

    def test_p1_matches_manhattan(self):
        X = np.array([[1.0, -2.0]])
        assert LpMeasure(1).bind(X).to_query([0.0, 0.0])[0] == 3.0

    def test_fractional_p(self):
        X = np.array([[1.0, 1.0]])
        assert np.isclose(LpMeasure(0.5).bind(X).to_query([0.0, 0.0])[0], 4.0)

    def test_sparse_input_is_densified(self):
        X = sp.csr_matrix(np.array([[3.0, 0.0]]))
        assert LpMeasure(2).bind(X).to_query([0.0, 0.0])[0] == 3.0

    def test_p_must_be_positive(self):
        with pytest.raises(ValueError, match="p must be positive"):
            LpMeasure(0)

    def test_name_formats_p(self):
        assert LpMeasure(2).name == "L2"
        assert LpMeasure(0.5).name == "L0.5"


class TestSNN:
    def test_requires_fitted_context(self):
        with pytest.raises(ValueError, match="context required"):
            SNNMeasure(2).bind(np.zeros((2, 2)))

    def test_context_must_hold_k_points(self):
        with pytest.raises(ValueError, match="context smaller than k"):
            SNNMeasure(5).fit(np.zeros((3, 2)))

    def test_shared_neighbor_fractions(self):
        # context on a line; neighbor lists of 1.0 and 1.4 overlap in {1.0, 2.0}
        context = np.array([[0.0], [1.0], [2.0], [10.0]])
        measure = SNNMeasure(2).fit(context)
        m = measure.bind(np.array([[1.0], [1.4]])).to_query([1.4])
        # 1.4's neighbors {1.0, 2.0}; 1.0's neighbors {1.0, 0.0} -> share 1 of 2
        assert np.allclose(m, [0.5, 0.0])

    def test_identical_points_share_everything(self):
        context = np.random.default_rng(0).normal(size=(20, 2))
        measure = SNNMeasure(5).fit(context)
        X = context[:4]
        D = measure.bind(X).pairwise()
        assert np.all(np.diag(D) == 0.0)
        assert measure.bind(X).to_query(X[2])[2] == 0.0

    def test_k_must_be_positive(self):
        with pytest.raises(ValueError, match="k must be"):
            SNNMeasure(0)


class TestAdaptiveGaussian:
    def test_requires_fitted_context(self):
        with pytest.raises(ValueError, match="context required"):
            AdaptiveGaussianMeasure(2).bind(np.zeros((2, 2)))

    def test_bandwidth_is_kth_neighbor_distance(self):
        context = np.array([[0.0], [1.0], [3.0]])
        measure = AdaptiveGaussianMeasure(2).fit(context)
        # a context member's own zero distance ranks first, so k=2 picks its
        # nearest other point
        assert measure._sigmas(np.array([[0.0]]))[0] == 1.0
        assert measure._sigmas(np.array([[3.0]]))[0] == 2.0

    def test_known_value(self):
        context = np.array([[0.0], [1.0], [3.0]])
        measure = AdaptiveGaussianMeasure(2).fit(context)
        m = measure.bind(np.array([[0.0]])).to_query([3.0])
        # sigma_q = 2, sigma_x = 1, d2 = 9 -> 1 - exp(-9/2)
        assert np.isclose(m[0], 1.0 - np.exp(-4.5))

    def test_duplicate_points_with_zero_bandwidth(self):
        context = np.array([[0.0], [0.0], [5.0]])
        measure = AdaptiveGaussianMeasure(2).fit(context)
        bound = measure.bind(np.array([[0.0], [5.0]]))
        m = bound.to_query([0.0])
        # zero bandwidth collapses to a point mass: same point similar,
        # different point not
        assert m[0] == 0.0 and m[1] == 1.0


class TestIK:
    def test_dissimilarity_complements_similarity(self):
        X = np.random.default_rng(2).normal(size=(30, 3))
        model = IsolationKernel(psi=4, t=20, seed=0).fit(X)
        measure = IKMeasure(model)
        codes = model.encode(X)
        m = measure.bind(X).to_query(X[5])
        matches = (codes.cells == codes.cells[5]).sum(axis=1)
        assert np.allclose(m, 1.0 - matches / 20.0)
        assert m[5] == 0.0

    def test_pairwise_matches_query_by_query(self):
        X = np.random.default_rng(3).normal(size=(12, 2))
        model = IsolationKernel(psi=2, t=10, seed=1).fit(X)
        bound = IKMeasure(model).bind(X)
        D = bound.pairwise()
        for i in range(12):
            col = bound.to_query(X[i])
            col[i] = 0.0  # pairwise zeroes the diagonal
            assert np.allclose(D[i], col)

    def test_unfitted_model_is_rejected(self):
        with pytest.raises(Exception, match="fitted|fit"):
            IKMeasure(IsolationKernel()).bind(np.zeros((2, 2)))

    def test_name(self):
        assert IKMeasure(IsolationKernel()).name == "IK"
