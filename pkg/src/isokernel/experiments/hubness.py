"""Hubness: how often each point appears in other points' k-NN lists.

O_k(x) counts the points whose k nearest neighbors (under a measure)
include x. A heavily right-skewed O_k distribution means a few hub points
dominate neighbor lists, which degrades nearest-neighbor reasoning.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import skew

from ..data import Dataset
from ..measures import Measure


@dataclass
class HubnessRow:
    measure: str
    d: int
    o_k: int
    p: float  # fraction of points with this k-occurrence count


def _points_of(data):
    return data.points if isinstance(data, Dataset) else data


def k_occurrences(data, measure: Measure, k: int) -> np.ndarray:
    """O_k for every point; self-matches excluded from neighbor lists."""
    X = _points_of(data)
    n = X.shape[0]
    if not 1 <= k < n:
        raise ValueError(f"k out of range: k={k}, dataset holds {n} points")
    D = measure.bind(X).pairwise()
    np.fill_diagonal(D, np.inf)
    counts = np.zeros(n, dtype=np.int64)
    for i in range(n):
        nn = np.lexsort((np.arange(n), D[i]))[:k]
        counts[nn] += 1
    return counts


def hubness(data, measure: Measure, k: int) -> list[HubnessRow]:
    """Normalized histogram of O_k values; probabilities sum to 1."""
    X = _points_of(data)
    occ = k_occurrences(data, measure, k)
    values, freq = np.unique(occ, return_counts=True)
    n = float(occ.shape[0])
    return [
        HubnessRow(measure.name, X.shape[1], int(v), int(c) / n)
        for v, c in zip(values, freq)
    ]


def occurrence_skewness(occ: np.ndarray) -> float:
    """Adjusted Fisher-Pearson sample skewness of the O_k values."""
    return float(skew(np.asarray(occ, dtype=np.float64), bias=False))
