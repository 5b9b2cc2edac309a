"""Nearest-neighbor instability under rising dimension.

Two statistics per (measure, dimension, query): the variance of the
query-to-dataset dissimilarity distribution relative to its squared mean,
and N_eps, the count of points within a (1 + eps) factor of the nearest
dissimilarity. Metrics that concentrate drive the ratio to zero and N_eps
toward the dataset size; a measure that keeps both stable keeps nearest
neighbors meaningful.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from sklearn.metrics.pairwise import euclidean_distances

from ..kernel import IsolationKernel
from ..measures import IKMeasure, Measure


@dataclass
class InstabilityRow:
    measure: str
    d: int
    query_kind: str  # between_clusters | sparse_center
    variance_ratio: float
    n_epsilon: int
    epsilon: float
    seed: int


@dataclass
class TSweepRow:
    t: int
    source: str  # given_data | uniform
    mean_n_eps: float
    stderr: float
    trials: int


def _dense_row(v) -> np.ndarray:
    return np.asarray(v).ravel()


def synth_queries(ds) -> tuple[np.ndarray, np.ndarray]:
    """Queries for a two-cluster dataset.

    q_i sits midway between the cluster means; q_c is the mean of the
    sparser cluster (larger average within-cluster 1-NN distance; the
    first cluster wins exact ties).
    """
    labels = ds.require_labels()
    values = np.unique(labels)
    if values.shape[0] != 2:
        raise ValueError(f"{ds.name}: two clusters required, got {values.shape[0]}")
    means = []
    nn_means = []
    for v in values:
        rows = ds.points[labels == v]
        means.append(_dense_row(rows.mean(axis=0)))
        d = euclidean_distances(rows)
        np.fill_diagonal(d, np.inf)
        nn_means.append(d.min(axis=1).mean())
    sparser = int(np.argmax(nn_means))
    q_i = (means[0] + means[1]) / 2.0
    q_c = means[sparser]
    return q_i, q_c


def _ratio_from(m: np.ndarray) -> float:
    mean = m.mean()
    if mean == 0.0:
        raise ValueError("zero mean dissimilarity: query duplicates the entire dataset")
    return float(np.var(m / mean))


def _neps_from(m: np.ndarray, epsilon: float) -> int:
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    lo = m.min()
    if lo == 0.0:
        # the (1 + eps) window around zero holds only exact zeros
        return int(np.count_nonzero(m == 0.0))
    return int(np.count_nonzero(m < (1.0 + epsilon) * lo))


def variance_ratio(measure: Measure, ds, q) -> float:
    """var(m(q, .) / mean m(q, .)) over the dataset."""
    if ds.n == 0:
        raise ValueError("empty dataset")
    return _ratio_from(measure.bind(ds.points).to_query(q))


def n_epsilon(measure: Measure, ds, q, epsilon: float) -> int:
    """Points with m(q, y) < (1 + epsilon) * min m(q, .); q must not be in ds."""
    if ds.n == 0:
        raise ValueError("empty dataset")
    return _neps_from(measure.bind(ds.points).to_query(q), epsilon)


def instability_rows(
    ds, measures: list[Measure], *, epsilon: float = 0.005, seed: int = 0
) -> list[InstabilityRow]:
    """Both statistics for both query kinds, one evaluation pass per measure."""
    q_i, q_c = synth_queries(ds)
    rows = []
    for measure in measures:
        bound = measure.bind(ds.points)
        for kind, q in (("between_clusters", q_i), ("sparse_center", q_c)):
            m = bound.to_query(q)
            rows.append(
                InstabilityRow(
                    measure.name,
                    ds.dim,
                    kind,
                    _ratio_from(m),
                    _neps_from(m, epsilon),
                    epsilon,
                    seed,
                )
            )
    return rows


def _bounding_box(X) -> tuple[np.ndarray, np.ndarray]:
    if sp.issparse(X):
        return (
            np.asarray(X.min(axis=0).todense()).ravel(),
            np.asarray(X.max(axis=0).todense()).ravel(),
        )
    return X.min(axis=0), X.max(axis=0)


def vary_t_sweep(
    ds,
    q,
    psi: int,
    t_values,
    *,
    trials: int = 10,
    source: str = "given_data",
    epsilon: float = 0.005,
    seed: int = 0,
) -> list[TSweepRow]:
    """Mean and standard error of N_eps per t, over freshly fitted models.

    `source` picks where partition references come from: the data itself, or
    points drawn uniformly over the data's bounding box (same size).
    """
    if source not in ("given_data", "uniform"):
        raise ValueError(f"unknown partition source {source!r}")
    t_values = list(t_values)
    if not t_values:
        raise ValueError("t_values must be nonempty")
    X = ds.points
    lo, hi = _bounding_box(X)
    # One spawned stream per trial: model seeds never collide across trials
    # regardless of t, and the uniform reference draw gets its own stream.
    children = np.random.SeedSequence(seed).spawn(trials)
    rows = []
    for t in t_values:
        vals = np.empty(trials)
        for r in range(trials):
            model_seed = int(children[r].generate_state(1, np.uint64)[0] >> 1)
            if source == "uniform":
                rng = np.random.default_rng(children[r].spawn(1)[0])
                ref_data = rng.uniform(lo, hi, size=(ds.n, ds.dim))
            else:
                ref_data = X
            model = IsolationKernel(psi=psi, t=t, seed=model_seed).fit(ref_data)
            m = IKMeasure(model).bind(X).to_query(q)
            vals[r] = _neps_from(m, epsilon)
        stderr = float(vals.std(ddof=1) / np.sqrt(trials)) if trials > 1 else 0.0
        rows.append(TSweepRow(int(t), source, float(vals.mean()), stderr, trials))
    return rows
