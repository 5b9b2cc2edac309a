"""Isolation Kernel model, point encoding, and code-level similarity ops.

A fitted model defines t independent Voronoi partitionings, each induced by
psi reference points subsampled from the fitting data. Encoding a point
records, per partitioning, the index of its nearest reference (squared
Euclidean, ties to the lowest reference index). Two codes are compared by
the fraction of partitionings in which they name the same cell.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.metrics.pairwise import euclidean_distances
from sklearn.utils.validation import check_is_fitted

from .validation import (
    DIMENSION_MISMATCH,
    INCOMPATIBLE_CODES,
    INSUFFICIENT_DATA,
    as_matrix,
    as_row,
    check_dim,
)


@dataclass(frozen=True)
class Codes:
    """Cell indices for a batch of points.

    cells: int array of shape (n, t) with values in [0, psi).
    psi: cell count per partitioning, carried so that codes from different
    models cannot be compared silently.
    """

    cells: np.ndarray
    psi: int

    def __post_init__(self):
        cells = np.asarray(self.cells)
        if cells.ndim != 2:
            raise ValueError("cells must be a 2-D integer array of shape (n, t)")
        if not np.issubdtype(cells.dtype, np.integer):
            raise ValueError("cells must be integers")
        if self.psi < 1:
            raise ValueError("psi must be a positive integer")
        if cells.size and (cells.min() < 0 or cells.max() >= self.psi):
            raise ValueError(f"cell indices must lie in [0, {self.psi})")
        object.__setattr__(self, "cells", cells)

    @property
    def n(self) -> int:
        return self.cells.shape[0]

    @property
    def t(self) -> int:
        return self.cells.shape[1]

    def row(self, i: int) -> "Codes":
        """Single-point view, kept as a (1, t) Codes."""
        return Codes(self.cells[i : i + 1], self.psi)


class IsolationKernel(BaseEstimator, TransformerMixin):
    """Random Voronoi partitioning encoder with an sklearn-style interface.

    Parameters
    ----------
    psi : int, >= 2
        Reference points per partitioning. Small psi makes coarse cells
        (high similarity everywhere); large psi sharpens the kernel.
    t : int, >= 1
        Number of partitionings; similarity is resolved in steps of 1/t.
    seed : int, >= 0 (64-bit)
        All t reference subsamples are drawn sequentially from a single
        numpy.random.default_rng(seed) stream. Models are reproducible, and
        distinct seeds give unrelated streams (unlike per-partitioning
        seed + i seeding, where nearby seeds would share almost all of
        their reference sets). Growing t extends a model: the first t
        partitionings of a larger model equal the smaller model's.
    """

    def __init__(self, psi: int = 16, t: int = 200, seed: int = 0):
        self.psi = psi
        self.t = t
        self.seed = seed

    def _check_params(self):
        if not isinstance(self.psi, (int, np.integer)) or self.psi < 2:
            raise ValueError(f"psi must be an integer >= 2, got {self.psi!r}")
        if not isinstance(self.t, (int, np.integer)) or self.t < 1:
            raise ValueError(f"t must be an integer >= 1, got {self.t!r}")
        if not isinstance(self.seed, (int, np.integer)) or self.seed < 0:
            raise ValueError(f"seed must be a nonnegative integer, got {self.seed!r}")

    def fit(self, X, y=None):
        """Sample t reference sets of psi distinct rows each, without replacement."""
        self._check_params()
        X = as_matrix(X)
        n, d = X.shape
        if n < self.psi:
            raise ValueError(
                f"{INSUFFICIENT_DATA}: need at least psi={self.psi} points, got {n}"
            )
        picks = np.empty((self.t, self.psi), dtype=np.int64)
        rng = np.random.default_rng(self.seed)
        for i in range(self.t):
            picks[i] = rng.choice(n, size=self.psi, replace=False)
        # The model keeps one copy of each distinct sampled row plus an index
        # table, instead of t*psi expanded rows; encode() gathers columns, so
        # results are identical to the expanded layout.
        unique_rows = np.unique(picks.ravel())
        self.pool_ = X[unique_rows].copy() if not sp.issparse(X) else X[unique_rows].tocsr()
        self.ref_idx_ = np.searchsorted(unique_rows, picks).astype(np.int64)
        self.dim_ = d
        self.n_features_in_ = d
        return self

    def _set_fitted(self, pool, ref_idx, dim):
        # Direct attribute injection used by the model loader.
        self.pool_ = pool
        self.ref_idx_ = np.asarray(ref_idx, dtype=np.int64)
        self.dim_ = int(dim)
        self.n_features_in_ = int(dim)
        return self

    def references(self) -> list:
        """The t reference sets as dense (psi, dim) arrays."""
        check_is_fitted(self, "pool_")
        pool = self.pool_.toarray() if sp.issparse(self.pool_) else self.pool_
        return [pool[self.ref_idx_[i]] for i in range(self.t)]

    def encode(self, X) -> Codes:
        """Map points to cell codes of shape (n, t)."""
        check_is_fitted(self, "pool_")
        X = as_matrix(X)
        check_dim(X, self.dim_)
        d2 = euclidean_distances(X, self.pool_, squared=True)
        cells = np.empty((X.shape[0], self.t), dtype=np.int32)
        for i in range(self.t):
            # argmin keeps the first occurrence: ties go to the lowest
            # reference index within the set.
            cells[:, i] = np.argmin(d2[:, self.ref_idx_[i]], axis=1)
        return Codes(cells, self.psi)

    def encode_row(self, x) -> Codes:
        """Encode a single point given as a 1-D array or (1, d) row."""
        return self.encode(as_row(x, dim=getattr(self, "dim_", None)))

    def transform(self, X):
        """Sparse feature map: one indicator block of width psi per partitioning.

        Every row has exactly t nonzeros of value 1/sqrt(t), so rows have unit
        norm and the plain inner product of two rows equals their cell-match
        similarity.
        """
        return feature_map(self.encode(X))

    def __sklearn_is_fitted__(self) -> bool:
        return hasattr(self, "pool_")


def feature_map(codes: Codes):
    """Expand codes into the scaled one-hot CSR matrix of shape (n, t*psi)."""
    n, t = codes.cells.shape
    cols = (codes.cells.astype(np.int64) + codes.psi * np.arange(t, dtype=np.int64)).ravel()
    indptr = np.arange(n + 1, dtype=np.int64) * t
    data = np.full(n * t, 1.0 / np.sqrt(t))
    return sp.csr_matrix((data, cols, indptr), shape=(n, t * codes.psi))


def _pair(a, b) -> tuple[np.ndarray, np.ndarray]:
    """Extract one code row from each argument and check compatibility."""
    rows = []
    psis = []
    for side in (a, b):
        if isinstance(side, Codes):
            if side.n != 1:
                raise ValueError(
                    f"expected a single code, got {side.n}; use pairwise_similarity for batches"
                )
            rows.append(side.cells[0])
            psis.append(side.psi)
        else:
            arr = np.asarray(side)
            if arr.ndim != 1 or not np.issubdtype(arr.dtype, np.integer):
                raise ValueError("a code is a 1-D integer array of cell indices")
            rows.append(arr)
    if len(psis) == 2 and psis[0] != psis[1]:
        raise ValueError(
            f"{INCOMPATIBLE_CODES}: psi differs ({psis[0]} vs {psis[1]})"
        )
    if rows[0].shape[0] != rows[1].shape[0]:
        raise ValueError(
            f"{INCOMPATIBLE_CODES}: t differs ({rows[0].shape[0]} vs {rows[1].shape[0]})"
        )
    if rows[0].shape[0] == 0:
        raise ValueError(f"{INCOMPATIBLE_CODES}: empty codes")
    return rows[0], rows[1]


def similarity(a, b) -> float:
    """Fraction of partitionings where the two codes share a cell, in [0, 1]."""
    ca, cb = _pair(a, b)
    return float(np.count_nonzero(ca == cb)) / ca.shape[0]


def ik_distance(a, b) -> float:
    """Dissimilarity 1 - similarity, in [0, 1]."""
    return 1.0 - similarity(a, b)


def feature_space_distance(a, b) -> float:
    """Euclidean distance between the (unscaled) one-hot feature maps.

    Equals sqrt(2 * t * ik_distance): a true metric, since it is the l2
    distance between points of the embedded feature space.
    """
    ca, cb = _pair(a, b)
    t = ca.shape[0]
    mismatches = t - int(np.count_nonzero(ca == cb))
    return float(np.sqrt(2.0 * mismatches))


def pairwise_matches(cells_a: np.ndarray, cells_b: np.ndarray) -> np.ndarray:
    """Count per-pair matching cells between two (n, t) code arrays.

    Accumulates one partitioning at a time, so the working set stays at one
    (na, nb) boolean block instead of (na, nb, t).
    """
    na, nb = cells_a.shape[0], cells_b.shape[0]
    t = cells_a.shape[1]
    counts = np.zeros((na, nb), dtype=np.int32)
    for i in range(t):
        counts += cells_a[:, i, None] == cells_b[None, :, i]
    return counts


def pairwise_similarity(a: Codes, b: Codes | None = None) -> np.ndarray:
    """Similarity matrix between two code batches (or within one)."""
    if b is None:
        b = a
    if a.psi != b.psi or a.t != b.t:
        raise ValueError(
            f"{INCOMPATIBLE_CODES}: (psi, t) = ({a.psi}, {a.t}) vs ({b.psi}, {b.t})"
        )
    return pairwise_matches(a.cells, b.cells) / float(a.t)


def gram(model: IsolationKernel, points) -> np.ndarray:
    """Similarity Gram matrix of the given points; diagonal is exactly 1."""
    codes = model.encode(points)
    return pairwise_similarity(codes)
