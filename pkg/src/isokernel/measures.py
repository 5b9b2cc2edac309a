"""Similarity and dissimilarity measures sharing one evaluation protocol.

Every measure turns into a dissimilarity for experiments: 1 - similarity for
the kernels, the raw distance for lp norms. `bind(X)` precomputes whatever
the measure needs against an evaluation set (encodings, neighbor lists), so
sweeps can evaluate many queries without redoing that work.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp
from sklearn.metrics.pairwise import euclidean_distances

from .kernel import IsolationKernel, pairwise_matches
from .validation import CONTEXT_REQUIRED, as_matrix, as_row


class BoundMeasure:
    """A measure attached to a fixed evaluation set."""

    def __init__(self, measure: "Measure", X):
        self.measure = measure
        self.X = X

    def to_query(self, q) -> np.ndarray:
        """Dissimilarity from one query point to every point of the set."""
        raise NotImplementedError

    def pairwise(self) -> np.ndarray:
        """Symmetric dissimilarity matrix of the set with a zero diagonal."""
        raise NotImplementedError


class Measure:
    name = "measure"

    def fit(self, X):
        """Attach reference context. Most measures need none; returns self."""
        return self

    def bind(self, X) -> BoundMeasure:
        raise NotImplementedError

    def dissimilarity_to(self, q, X) -> np.ndarray:
        return self.bind(X).to_query(q)

    def pairwise_dissimilarity(self, X) -> np.ndarray:
        return self.bind(X).pairwise()


def _zero_diagonal(m: np.ndarray) -> np.ndarray:
    np.fill_diagonal(m, 0.0)
    return m


class _GaussianBound(BoundMeasure):
    def to_query(self, q):
        q = as_row(q, dim=self.X.shape[1])
        d2 = euclidean_distances(q, self.X, squared=True)[0]
        return 1.0 - np.exp(-d2 / self.measure.sigma**2)

    def pairwise(self):
        d2 = euclidean_distances(self.X, squared=True)
        return _zero_diagonal(1.0 - np.exp(-d2 / self.measure.sigma**2))


class GaussianMeasure(Measure):
    """kappa(x, y) = exp(-||x - y||^2 / sigma^2)."""

    name = "GK"

    def __init__(self, sigma: float):
        if sigma <= 0:
            raise ValueError("sigma must be positive")
        self.sigma = float(sigma)

    def bind(self, X):
        return _GaussianBound(self, as_matrix(X))


def _unit_rows(X):
    if sp.issparse(X):
        norms = np.sqrt(np.asarray(X.multiply(X).sum(axis=1)).ravel())
        inv = np.divide(1.0, norms, out=np.zeros_like(norms), where=norms > 0)
        return sp.csr_matrix(X.multiply(inv[:, None])), norms
    norms = np.linalg.norm(X, axis=1)
    inv = np.divide(1.0, norms, out=np.zeros_like(norms), where=norms > 0)
    return X * inv[:, None], norms


class _LinearBound(BoundMeasure):
    def __init__(self, measure, X):
        super().__init__(measure, X)
        self.unit, _ = _unit_rows(X)

    def _cosine(self, qu):
        cos = self.unit @ qu.T
        if sp.issparse(cos):
            cos = np.asarray(cos.todense())
        return cos

    def to_query(self, q):
        q = as_row(q, dim=self.X.shape[1])
        qu, qn = _unit_rows(q)
        return 1.0 - self._cosine(qu).ravel()

    def pairwise(self):
        return _zero_diagonal(1.0 - self._cosine(self.unit))


class LinearMeasure(Measure):
    """Inner product normalized by the vector norms (cosine).

    Zero vectors get similarity 0 against everything. The dissimilarity
    1 - cos(x, y) can reach 2 for opposed vectors.
    """

    name = "LK"

    def bind(self, X):
        return _LinearBound(self, as_matrix(X))


def _lp_block(Q: np.ndarray, X: np.ndarray, p: float) -> np.ndarray:
    # One query row at a time keeps the |q - x| temporary at (n, d).
    out = np.empty((Q.shape[0], X.shape[0]))
    for i in range(Q.shape[0]):
        out[i] = np.power((np.abs(X - Q[i]) ** p).sum(axis=1), 1.0 / p)
    return out


class _LpBound(BoundMeasure):
    def to_query(self, q):
        q = np.asarray(as_row(q, dim=self.X.shape[1]))
        return _lp_block(q, self.X, self.measure.p)[0]

    def pairwise(self):
        return _zero_diagonal(_lp_block(self.X, self.X, self.measure.p))


class LpMeasure(Measure):
    """Minkowski distance (sum |x_i - y_i|^p)^(1/p); p below 1 is allowed.

    Used directly as the dissimilarity, without a similarity conversion.
    """

    def __init__(self, p: float):
        if p <= 0:
            raise ValueError("p must be positive")
        self.p = float(p)
        self.name = f"L{p:g}"

    def bind(self, X):
        X = as_matrix(X)
        if sp.issparse(X):
            X = np.asarray(X.todense())
        return _LpBound(self, X)


def _knn_lists(X, context, k: int) -> np.ndarray:
    """Indices of the k nearest context points per row, ties to lower index."""
    d = euclidean_distances(X, context)
    order = np.argsort(d, axis=1, kind="stable")  # stable argsort keeps lowest index first on ties
    return order[:, :k]


def _membership(nbrs: np.ndarray, n_context: int) -> np.ndarray:
    memb = np.zeros((nbrs.shape[0], n_context), dtype=bool)
    rows = np.repeat(np.arange(nbrs.shape[0]), nbrs.shape[1])
    memb[rows, nbrs.ravel()] = True
    return memb


class _SNNBound(BoundMeasure):
    def __init__(self, measure, X):
        super().__init__(measure, X)
        self.memb = _membership(
            _knn_lists(X, measure.context_, measure.k), measure.context_.shape[0]
        )

    def to_query(self, q):
        q = as_row(q, dim=self.X.shape[1])
        qm = _membership(
            _knn_lists(q, self.measure.context_, self.measure.k),
            self.measure.context_.shape[0],
        )
        # bool matmul would OR instead of count; cast first
        shared = (self.memb.astype(np.int32) @ qm[0].astype(np.int32)).astype(np.float64)
        return 1.0 - shared / self.measure.k

    def pairwise(self):
        shared = (self.memb.astype(np.int32) @ self.memb.astype(np.int32).T).astype(
            np.float64
        )
        return _zero_diagonal(1.0 - shared / self.measure.k)


class SNNMeasure(Measure):
    """Shared nearest neighbors: |N_k(x) ∩ N_k(y)| / k over a context set.

    Neighbor lists are taken against the fitted context; a context member's
    own zero-distance entry counts as its first neighbor.
    """

    name = "SNN"

    def __init__(self, k: int):
        if k < 1:
            raise ValueError("k must be a positive integer")
        self.k = int(k)

    def fit(self, X):
        X = as_matrix(X)
        if X.shape[0] < self.k:
            raise ValueError(f"context smaller than k={self.k}")
        self.context_ = X
        return self

    def bind(self, X):
        if not hasattr(self, "context_"):
            raise ValueError(
                f"{CONTEXT_REQUIRED}: fit SNN on a reference dataset before use"
            )
        return _SNNBound(self, as_matrix(X))


class _AGBound(BoundMeasure):
    def __init__(self, measure, X):
        super().__init__(measure, X)
        self.sig = measure._sigmas(X)

    def to_query(self, q):
        q = as_row(q, dim=self.X.shape[1])
        sig_q = self.measure._sigmas(q)[0]
        d2 = euclidean_distances(q, self.X, squared=True)[0]
        return 1.0 - _safe_exp_ratio(d2, sig_q * self.sig)

    def pairwise(self):
        d2 = euclidean_distances(self.X, squared=True)
        return _zero_diagonal(1.0 - _safe_exp_ratio(d2, np.outer(self.sig, self.sig)))


def _safe_exp_ratio(d2, denom):
    """exp(-d2/denom) with zero denominators treated as a point mass at 0."""
    denom = np.asarray(denom, dtype=np.float64)
    out = np.zeros_like(np.broadcast_arrays(d2, denom)[0], dtype=np.float64)
    ok = denom > 0
    out[ok] = np.exp(-np.asarray(d2)[ok] / denom[ok])
    out[~ok] = (np.asarray(d2)[~ok] == 0).astype(np.float64)
    return out


class AdaptiveGaussianMeasure(Measure):
    """Gaussian with per-point bandwidth sigma_x = distance to the k-th NN.

    kappa(x, y) = exp(-||x - y||^2 / (sigma_x * sigma_y)), bandwidths taken
    against the fitted context (a member's zero self-distance counts first).
    """

    name = "AG"

    def __init__(self, k: int):
        if k < 1:
            raise ValueError("k must be a positive integer")
        self.k = int(k)

    def fit(self, X):
        X = as_matrix(X)
        if X.shape[0] < self.k:
            raise ValueError(f"context smaller than k={self.k}")
        self.context_ = X
        return self

    def _sigmas(self, X) -> np.ndarray:
        if not hasattr(self, "context_"):
            raise ValueError(
                f"{CONTEXT_REQUIRED}: fit AG on a reference dataset before use"
            )
        d = euclidean_distances(X, self.context_)
        part = np.partition(d, self.k - 1, axis=1)
        return part[:, self.k - 1]

    def bind(self, X):
        if not hasattr(self, "context_"):
            raise ValueError(
                f"{CONTEXT_REQUIRED}: fit AG on a reference dataset before use"
            )
        return _AGBound(self, as_matrix(X))


class _IKBound(BoundMeasure):
    def __init__(self, measure, X):
        super().__init__(measure, X)
        self.codes = measure.model.encode(X)

    def to_query(self, q):
        cq = self.measure.model.encode_row(q)
        matches = np.count_nonzero(self.codes.cells == cq.cells[0], axis=1)
        return 1.0 - matches / float(self.codes.t)

    def pairwise(self):
        sim = pairwise_matches(self.codes.cells, self.codes.cells) / float(self.codes.t)
        return _zero_diagonal(1.0 - sim)


class IKMeasure(Measure):
    """Isolation-kernel dissimilarity 1 - similarity under a fitted model."""

    name = "IK"

    def __init__(self, model: IsolationKernel):
        self.model = model

    def bind(self, X):
        return _IKBound(self, as_matrix(X))
