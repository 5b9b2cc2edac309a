"""Density-peaks clustering over an arbitrary dissimilarity, plus AMI.

Centers are points that combine high local density (many points within an
epsilon ball) with large separation (far from any denser point). The
procedure is fully deterministic: every tie breaks toward the lower point
index.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.metrics import adjusted_mutual_info_score

from ..data import Dataset
from ..measures import Measure


@dataclass
class ClusterResult:
    labels: np.ndarray  # (n,) ints in [0, k)
    centers: np.ndarray  # (k,) point indices, in selection order
    ami_vs_truth: float | None = None


def dp_from_matrix(M: np.ndarray, k: int, eps_fraction: float) -> tuple[np.ndarray, np.ndarray]:
    """Density-peaks assignment from a symmetric dissimilarity matrix.

    rho_i counts other points closer than eps = eps_fraction * max(M).
    delta_i is the dissimilarity to the nearest point processed earlier in
    decreasing-rho order; the densest point takes its farthest dissimilarity
    instead. Centers are the k largest rho * delta; every other point joins
    the cluster of its nearest already-assigned point.
    """
    M = np.asarray(M, dtype=np.float64)
    n = M.shape[0]
    if M.ndim != 2 or M.shape[1] != n:
        raise ValueError("M must be a square dissimilarity matrix")
    if not 1 <= k <= n:
        raise ValueError(f"k out of range: k={k}, matrix holds {n} points")
    if not 0.0 < eps_fraction <= 1.0:
        raise ValueError("eps_fraction must lie in (0, 1]")
    eps = eps_fraction * M.max()
    within = M < eps
    np.fill_diagonal(within, False)
    rho = within.sum(axis=1)
    order = np.lexsort((np.arange(n), -rho))  # decreasing rho, lowest index first
    M_ord = M[np.ix_(order, order)]
    delta_ord = np.empty(n)
    delta_ord[0] = M_ord[0].max()
    if n > 1:
        # running min over earlier-processed points
        cummin = np.minimum.accumulate(M_ord, axis=1)
        delta_ord[1:] = cummin[np.arange(1, n), np.arange(n - 1)]
    delta = np.empty(n)
    delta[order] = delta_ord
    gamma = rho * delta
    # rank by gamma, then density, then index: the densest point is provably
    # gamma-maximal (delta_i <= M[i, top] <= delta_top and rho_i <= rho_top),
    # so the first point in processing order is always selected
    centers = np.lexsort((np.arange(n), -rho, -gamma))[:k]
    labels = np.full(n, -1, dtype=np.int64)
    labels[centers] = np.arange(k)
    assigned: list[int] = []
    for i in order:
        if labels[i] < 0:
            earlier = np.asarray(assigned)
            cand = M[i, earlier]
            best = earlier[cand == cand.min()].min()  # nearest, lowest index on ties
            labels[i] = labels[best]
        assigned.append(i)
    return labels, centers


def _dissimilarity_matrix(ds, measure: Measure) -> np.ndarray:
    X = ds.points if isinstance(ds, Dataset) else ds
    return measure.bind(X).pairwise()


def dp_cluster(ds, measure: Measure, k: int, eps_fraction: float) -> ClusterResult:
    """Cluster a dataset under a measure; AMI vs labels filled when present."""
    labels, centers = dp_from_matrix(_dissimilarity_matrix(ds, measure), k, eps_fraction)
    truth = ds.labels if isinstance(ds, Dataset) else None
    score = ami(labels, truth) if truth is not None else None
    return ClusterResult(labels, centers, score)


def ami(a, b) -> float:
    """Adjusted mutual information, permutation-model chance correction,
    arithmetic-mean normalizer. Identical partitions score exactly 1;
    a degenerate pair of single-cluster labelings scores 0."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError(
            f"length mismatch: {a.shape} vs {b.shape} label vectors"
        )
    if a.shape[0] == 0:
        raise ValueError("empty labelings")
    if np.unique(a).shape[0] == 1 and np.unique(b).shape[0] == 1:
        # zero entropy on both sides leaves a 0/0 normalizer
        return 0.0
    return float(adjusted_mutual_info_score(a, b, average_method="arithmetic"))


def best_eps_ami(
    ds, measure: Measure, k: int, fractions=None
) -> tuple[float, float]:
    """Best AMI against the dataset labels over an eps-fraction grid.

    Default grid: 1% through 99% of the maximum pairwise dissimilarity.
    Returns (best_ami, best_fraction); ties keep the smallest fraction.
    """
    truth = ds.require_labels()
    if fractions is None:
        fractions = np.arange(1, 100) / 100.0
    M = _dissimilarity_matrix(ds, measure)
    best = (-np.inf, None)
    for frac in fractions:
        labels, _ = dp_from_matrix(M, k, float(frac))
        score = ami(labels, truth)
        if score > best[0]:
            best = (score, float(frac))
    return best
