"""Exact k-nearest-neighbor search over pluggable metric spaces.

The ball tree is purely metric: node centers are medoids (the member point
minimizing the maximum distance to the rest), so it works equally over raw
vectors and over isolation-kernel codes, whose space exposes no coordinates
to average. Brute-force search shares the same tie-breaking contract and
serves as the exactness oracle.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from heapq import heappush, heapreplace

import numpy as np
import scipy.sparse as sp
from sklearn.metrics.pairwise import euclidean_distances

from .kernel import Codes, IsolationKernel, pairwise_matches
from .measures import _unit_rows
from .validation import INCOMPATIBLE_CODES, as_matrix, as_row


@dataclass
class QueryStats:
    """Work counters for one search; distance evaluations are the primary
    cross-method comparison statistic (wall time is machine noise at desk
    scale)."""

    distance_evaluations: int = 0
    nodes_visited: int = 0
    wall_time: float = 0.0


class RawEuclidean:
    """Euclidean distance over raw feature vectors (dense or sparse)."""

    name = "euclidean"

    def prepare(self, points):
        return as_matrix(points)

    def prepare_query(self, prepared, q):
        return as_row(q, dim=prepared.shape[1])

    def row_query(self, prepared, i: int):
        return prepared[i : i + 1]

    def size(self, prepared) -> int:
        return prepared.shape[0]

    def dist(self, prepared, idx, qrep) -> np.ndarray:
        # direct differences, not the dot-product expansion: the result is
        # then independent of how many rows share the batch, so leaf-sized
        # slices and full scans agree to the last bit
        rows = prepared[idx]
        if sp.issparse(rows):
            rows = rows.toarray()
        qr = qrep.toarray() if sp.issparse(qrep) else qrep
        diff = rows - qr
        return np.sqrt((diff * diff).sum(axis=1))

    def pairwise(self, prepared) -> np.ndarray:
        d = euclidean_distances(prepared)
        np.fill_diagonal(d, 0.0)
        return d


class NormalizedLinear(RawEuclidean):
    """Euclidean distance after scaling every vector to unit norm.

    Monotone in cosine dissimilarity while satisfying the triangle
    inequality; zero vectors stay at the origin.
    """

    name = "normalized-linear"

    def prepare(self, points):
        unit, _ = _unit_rows(as_matrix(points))
        return unit

    def prepare_query(self, prepared, q):
        unit, _ = _unit_rows(as_row(q, dim=prepared.shape[1]))
        return unit


class IKFeature:
    """Feature-map distance over codes: sqrt(2 * (t - matches)).

    Euclidean in the one-hot embedded space, hence a true metric. Accepts
    pre-encoded Codes, or raw points when constructed with a fitted model.
    """

    name = "ik-feature"

    def __init__(self, model: IsolationKernel | None = None):
        self.model = model

    def prepare(self, points) -> Codes:
        if isinstance(points, Codes):
            return points
        if self.model is None:
            raise ValueError(
                "IKFeature needs either pre-encoded Codes or a fitted model"
            )
        return self.model.encode(points)

    def prepare_query(self, prepared: Codes, q) -> np.ndarray:
        if isinstance(q, Codes):
            if q.n != 1:
                raise ValueError("expected a single query code")
            if q.psi != prepared.psi or q.t != prepared.t:
                raise ValueError(
                    f"{INCOMPATIBLE_CODES}: query (psi, t) = ({q.psi}, {q.t}), "
                    f"index ({prepared.psi}, {prepared.t})"
                )
            return q.cells[0]
        if self.model is None:
            raise ValueError(
                "IKFeature needs either a Codes query or a fitted model"
            )
        return self.model.encode_row(q).cells[0]

    def row_query(self, prepared: Codes, i: int) -> np.ndarray:
        return prepared.cells[i]

    def size(self, prepared: Codes) -> int:
        return prepared.n

    def dist(self, prepared: Codes, idx, qrep) -> np.ndarray:
        matches = np.count_nonzero(prepared.cells[idx] == qrep, axis=1)
        return np.sqrt(2.0 * (prepared.t - matches))

    def pairwise(self, prepared: Codes) -> np.ndarray:
        matches = pairwise_matches(prepared.cells, prepared.cells)
        d = np.sqrt(2.0 * (prepared.t - matches))
        np.fill_diagonal(d, 0.0)
        return d


@dataclass
class _Node:
    center: int  # index of the medoid point
    radius: float
    left: int = -1
    right: int = -1
    items: np.ndarray | None = None  # leaf membership, ascending indices


class BallTree:
    """Exact metric ball tree with medoid centers and covering radii."""

    def __init__(self, points, metric, leaf_size: int = 15):
        if leaf_size < 1:
            raise ValueError("leaf_size must be a positive integer")
        self.metric = metric
        self.leaf_size = leaf_size
        self.prepared = metric.prepare(points)
        self.n = metric.size(self.prepared)
        if self.n == 0:
            raise ValueError("cannot build an index over an empty point set")
        # Build-time distances come from one full pairwise matrix; queries
        # never touch it, so query counters reflect query work only.
        self._nodes: list[_Node] = []
        D = metric.pairwise(self.prepared)
        self.root = self._build(np.arange(self.n), D)

    def _build(self, idx: np.ndarray, D: np.ndarray) -> int:
        sub = D[np.ix_(idx, idx)]
        worst = sub.max(axis=1) if idx.size > 1 else np.zeros(1)
        mpos = int(np.argmin(worst))  # first minimum: lowest index wins ties
        node = _Node(center=int(idx[mpos]), radius=float(worst[mpos]))
        self._nodes.append(node)
        me = len(self._nodes) - 1
        if idx.size <= self.leaf_size or worst[mpos] == 0.0:
            # small enough, or all points coincide and no split can help
            node.items = idx
            return me
        s1 = int(np.argmax(sub[mpos]))
        s2 = int(np.argmax(sub[s1]))
        to_first = sub[s1] <= sub[s2]  # ties go to the first seed
        left_idx, right_idx = idx[to_first], idx[~to_first]
        if left_idx.size == 0 or right_idx.size == 0:
            node.items = idx
            return me
        node.left = self._build(left_idx, D)
        node.right = self._build(right_idx, D)
        return me

    def audit_radii(self) -> bool:
        """Structural check: every node covers its subtree within its radius."""
        D = self.metric.pairwise(self.prepared)

        def collect(ni: int) -> np.ndarray:
            node = self._nodes[ni]
            if node.items is not None:
                return node.items
            return np.concatenate([collect(node.left), collect(node.right)])

        for ni, node in enumerate(self._nodes):
            members = collect(ni)
            if D[node.center, members].max() > node.radius + 1e-12:
                return False
        return True

    def query(self, q, k: int, *, audit: list | None = None):
        """The k nearest indexed points, ascending (distance, index).

        Returns (pairs, QueryStats). `audit`, when given, records
        (lower_bound, kth_distance) at every prune for soundness checks.
        """
        if not 1 <= k <= self.n:
            raise ValueError(f"k out of range: k={k}, index holds {self.n} points")
        qrep = self.metric.prepare_query(self.prepared, q)
        return self._query_prepared(qrep, k, audit=audit)

    def _query_prepared(self, qrep, k: int, *, audit: list | None = None):
        stats = QueryStats()
        start = time.perf_counter()
        heap: list[tuple[float, int]] = []  # (-dist, -idx): root is the worst kept

        def offer(d: float, i: int):
            if len(heap) < k:
                heappush(heap, (-d, -i))
            else:
                wd, wi = -heap[0][0], -heap[0][1]
                if (d, i) < (wd, wi):
                    heapreplace(heap, (-d, -i))

        def visit(ni: int):
            stats.nodes_visited += 1
            node = self._nodes[ni]
            if node.items is not None:
                dists = self.metric.dist(self.prepared, node.items, qrep)
                stats.distance_evaluations += len(node.items)
                for d, i in zip(dists, node.items):
                    offer(float(d), int(i))
                return
            order = []
            for child in (node.left, node.right):
                cnode = self._nodes[child]
                dc = float(
                    self.metric.dist(self.prepared, np.array([cnode.center]), qrep)[0]
                )
                stats.distance_evaluations += 1
                order.append((dc - cnode.radius, child))
            order.sort()
            for lower_bound, child in order:
                if len(heap) == k:
                    kth = -heap[0][0]
                    # strict: an equal bound can still hide an equal-distance,
                    # lower-index point, so only a strictly worse ball is cut
                    if lower_bound > kth:
                        if audit is not None:
                            audit.append((lower_bound, kth))
                        continue
                visit(child)

        visit(self.root)
        pairs = sorted((-d, -i) for d, i in heap)
        stats.wall_time = time.perf_counter() - start
        return [(i, d) for d, i in pairs], stats


def brute_knn(points, q, k: int, metric):
    """Linear-scan k-NN with the same tie-breaking as the ball tree."""
    prepared = metric.prepare(points) if not _is_prepared(points, metric) else points
    n = metric.size(prepared)
    if not 1 <= k <= n:
        raise ValueError(f"k out of range: k={k}, set holds {n} points")
    qrep = metric.prepare_query(prepared, q)
    return _brute_prepared(prepared, qrep, k, metric)


def _is_prepared(points, metric) -> bool:
    if isinstance(metric, IKFeature):
        return isinstance(points, Codes)
    return False


def _brute_prepared(prepared, qrep, k: int, metric):
    stats = QueryStats()
    start = time.perf_counter()
    dists = metric.dist(prepared, np.arange(metric.size(prepared)), qrep)
    stats.distance_evaluations += metric.size(prepared)
    order = np.lexsort((np.arange(dists.shape[0]), dists))[:k]
    stats.wall_time = time.perf_counter() - start
    return [(int(i), float(dists[i])) for i in order], stats


def precision_at_k(ds, metric, k: int) -> float:
    """Mean fraction of each point's k nearest neighbors sharing its label.

    Every point queries the rest of the dataset (itself excluded).
    """
    labels = ds.require_labels()
    prepared = metric.prepare(ds.points)
    n = metric.size(prepared)
    if n <= k:
        raise ValueError(f"k out of range: k={k} needs more than k points, got {n}")
    D = metric.pairwise(prepared)
    np.fill_diagonal(D, np.inf)
    hits = 0
    for i in range(n):
        nn = np.lexsort((np.arange(n), D[i]))[:k]
        hits += int(np.count_nonzero(labels[nn] == labels[i]))
    return hits / float(n * k)


@dataclass
class BenchRow:
    method: str
    metric: str
    total_distance_evals: int
    mean_wall_us: float


@dataclass
class BenchReport:
    rows: list[BenchRow] = field(default_factory=list)


def bench_index(points, metric, k: int, leaf_size: int = 15) -> BenchReport:
    """Query every point against the full set with brute force and the tree.

    Aggregates query-time distance evaluations (the comparison that matters
    at desk scale) and mean per-query wall time in microseconds.
    """
    tree = BallTree(points, metric, leaf_size=leaf_size)
    prepared = tree.prepared
    n = tree.n
    if not 1 <= k <= n:
        raise ValueError(f"k out of range: k={k}, set holds {n} points")
    totals = {"brute": [0, 0.0], "balltree": [0, 0.0]}
    for i in range(n):
        qrep = metric.row_query(prepared, i)
        _, bstats = _brute_prepared(prepared, qrep, k, metric)
        totals["brute"][0] += bstats.distance_evaluations
        totals["brute"][1] += bstats.wall_time
        _, tstats = tree._query_prepared(qrep, k)
        totals["balltree"][0] += tstats.distance_evaluations
        totals["balltree"][1] += tstats.wall_time
    report = BenchReport()
    for method in ("brute", "balltree"):
        evals, wall = totals[method]
        report.rows.append(
            BenchRow(method, metric.name, evals, wall / n * 1e6)
        )
    return report
