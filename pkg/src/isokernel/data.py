"""Datasets: LIBSVM parsing, synthetic generators, normalization, CSV I/O."""

from __future__ import annotations

import io
import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .tables import open_output
from .validation import DIMENSION_MISMATCH, as_matrix


@dataclass
class Dataset:
    """A named point set with optional integer class labels."""

    name: str
    points: object  # (n, d) float64 ndarray or CSR matrix
    labels: np.ndarray | None = None

    def __post_init__(self):
        if sp.issparse(self.points):
            self.points = self.points.tocsr()
        else:
            self.points = np.asarray(self.points, dtype=np.float64)
            if self.points.ndim != 2:
                raise ValueError(f"{self.name}: points must be a 2-D matrix")
        if self.points.shape[0] > 0:
            self.points = as_matrix(self.points, name=self.name or "points")
        if self.labels is not None:
            self.labels = np.asarray(self.labels, dtype=np.int64)
            if self.labels.shape != (self.n,):
                raise ValueError(
                    f"{self.name}: {self.labels.shape[0]} labels for {self.n} points"
                )

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def require_labels(self) -> np.ndarray:
        if self.labels is None:
            raise ValueError(f"{self.name}: operation requires a labeled dataset")
        return self.labels


def _parse_error(lineno: int, detail: str) -> ValueError:
    return ValueError(f"parse error at line {lineno}: {detail}")


def parse_libsvm(source, *, dim: int | None = None, name: str = "libsvm") -> Dataset:
    """Parse LIBSVM sparse text: `<label> <idx>:<val> ...`, 1-based ascending indices.

    Comment lines starting with '#' and blank lines are skipped. `dim` forces
    the feature count; otherwise the largest index seen decides it. Indices
    are converted to 0-based.
    """
    if isinstance(source, str):
        stream = io.StringIO(source)
    elif hasattr(source, "read"):
        stream = source
    else:
        stream = open(source, "r", encoding="ascii")
    labels: list[int] = []
    data: list[float] = []
    indices: list[int] = []
    indptr: list[int] = [0]
    max_index = 0
    try:
        for lineno, raw in enumerate(stream, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            try:
                label_f = float(parts[0])
            except ValueError:
                raise _parse_error(lineno, f"bad label {parts[0]!r}") from None
            if not label_f.is_integer():
                raise _parse_error(lineno, f"non-integer label {parts[0]!r}")
            labels.append(int(label_f))
            prev = 0
            for token in parts[1:]:
                idx_s, sep, val_s = token.partition(":")
                if not sep:
                    raise _parse_error(lineno, f"feature {token!r} is missing ':'")
                try:
                    idx = int(idx_s)
                except ValueError:
                    raise _parse_error(lineno, f"bad feature index in {token!r}") from None
                try:
                    val = float(val_s)
                except ValueError:
                    raise _parse_error(lineno, f"bad feature value in {token!r}") from None
                if not math.isfinite(val):
                    raise _parse_error(lineno, f"non-finite value in {token!r}")
                if idx < 1:
                    raise _parse_error(lineno, f"index {idx} is not 1-based")
                if idx <= prev:
                    raise _parse_error(
                        lineno, f"non-ascending index {idx} after {prev}"
                    )
                prev = idx
                indices.append(idx - 1)
                data.append(val)
            max_index = max(max_index, prev)
            indptr.append(len(indices))
    finally:
        if stream is not source and not isinstance(source, str):
            stream.close()
    if dim is None:
        dim = max_index
    elif dim < max_index:
        raise ValueError(
            f"dim override {dim} is smaller than the largest index {max_index}"
        )
    points = sp.csr_matrix(
        (np.asarray(data, dtype=np.float64), indices, indptr),
        shape=(len(labels), dim),
    )
    return Dataset(name, points, np.asarray(labels, dtype=np.int64))


def write_libsvm(ds: Dataset, path, *, header_lines: list[str] | None = None) -> None:
    """Write LIBSVM text (nonzero entries only, 1-based indices, 17 digits)."""
    X = ds.points.tocsr() if sp.issparse(ds.points) else ds.points
    labels = ds.labels if ds.labels is not None else np.zeros(ds.n, dtype=np.int64)
    with open_output(path) as fh:
        for line in header_lines or []:
            fh.write(f"# {line}\n")
        for i in range(ds.n):
            if sp.issparse(X):
                row = X.getrow(i)
                cols, vals = row.indices, row.data
            else:
                cols = np.nonzero(X[i])[0]
                vals = X[i, cols]
            feats = " ".join(f"{c + 1}:{v:.17g}" for c, v in zip(cols, vals))
            fh.write(f"{labels[i]} {feats}".rstrip())
            fh.write("\n")


def gen_gaussians(
    d: int, n_per_cluster: int, separation: float = 10.0, seed: int = 0
) -> Dataset:
    """Two spherical Gaussian clusters in R^d.

    Cluster 0 is standard normal per coordinate; cluster 1 is shifted by
    `separation` in every coordinate. Labels are 0/1.
    """
    if d < 1 or n_per_cluster < 1:
        raise ValueError("d and n_per_cluster must be positive")
    rng = np.random.default_rng(seed)
    c0 = rng.standard_normal((n_per_cluster, d))
    c1 = rng.standard_normal((n_per_cluster, d)) + separation
    points = np.vstack([c0, c1])
    labels = np.repeat([0, 1], n_per_cluster)
    return Dataset(f"gaussians-d{d}-n{n_per_cluster}-seed{seed}", points, labels)


def gen_w_gaussians(
    w: int, n_per_cluster: int, sd1: float = 1.0, sd2: float = 32.0, seed: int = 0
) -> Dataset:
    """Two Gaussian clusters on disjoint w-dimensional subspaces of R^(2w).

    Cluster 0 lives on the first w coordinates with spread sd1 and is exactly
    zero on the rest; cluster 1 mirrors that on the last w coordinates with
    spread sd2. The supports meet only at the origin.
    """
    if w < 1 or n_per_cluster < 1:
        raise ValueError("w and n_per_cluster must be positive")
    if sd1 <= 0 or sd2 <= 0:
        raise ValueError("standard deviations must be positive")
    rng = np.random.default_rng(seed)
    points = np.zeros((2 * n_per_cluster, 2 * w))
    points[:n_per_cluster, :w] = rng.normal(0.0, sd1, (n_per_cluster, w))
    points[n_per_cluster:, w:] = rng.normal(0.0, sd2, (n_per_cluster, w))
    labels = np.repeat([0, 1], n_per_cluster)
    return Dataset(f"w-gaussians-w{w}-n{n_per_cluster}-seed{seed}", points, labels)


def _minmax_stats(X) -> tuple[np.ndarray, np.ndarray]:
    if sp.issparse(X):
        col_min = np.asarray(X.min(axis=0).todense()).ravel()
        col_max = np.asarray(X.max(axis=0).todense()).ravel()
    else:
        col_min = X.min(axis=0)
        col_max = X.max(axis=0)
    span = col_max - col_min
    scale = np.divide(1.0, span, out=np.zeros_like(span), where=span > 0)
    return col_min, scale


def minmax_normalize(ds: Dataset, reference: Dataset | None = None) -> Dataset:
    """Affinely map every attribute to [0, 1]; constant attributes map to 0.

    With `reference`, column ranges come from the reference dataset instead,
    so queries scale exactly like the set they are matched against; values
    outside the reference range then land outside [0, 1]. Sparse data stays
    sparse when every column minimum is 0 (a pure rescale); otherwise it is
    densified.
    """
    if ds.n == 0:
        raise ValueError(f"{ds.name}: cannot normalize an empty dataset")
    src = ds if reference is None else reference
    if src.n == 0:
        raise ValueError(f"{src.name}: cannot take ranges from an empty dataset")
    if src.dim != ds.dim:
        raise ValueError(
            f"{DIMENSION_MISMATCH}: reference has {src.dim} attributes, "
            f"data has {ds.dim}"
        )
    col_min, scale = _minmax_stats(src.points)
    X = ds.points
    if sp.issparse(X):
        if np.all(col_min == 0.0):
            out = sp.csr_matrix(X.multiply(scale[None, :]))
            return Dataset(ds.name, out, ds.labels)
        X = np.asarray(X.todense())
    return Dataset(ds.name, (X - col_min) * scale, ds.labels)


def write_dense_csv(ds: Dataset, path, *, header_lines: list[str] | None = None) -> None:
    """Dense CSV with header row f0,...,f{d-1},label (label -1 when absent)."""
    X = np.asarray(ds.points.todense()) if sp.issparse(ds.points) else ds.points
    labels = ds.labels if ds.labels is not None else np.full(ds.n, -1, dtype=np.int64)
    with open_output(path) as fh:
        for line in header_lines or []:
            fh.write(f"# {line}\n")
        fh.write(",".join([f"f{j}" for j in range(ds.dim)] + ["label"]))
        fh.write("\n")
        for i in range(ds.n):
            fh.write(",".join(f"{v:.17g}" for v in X[i]))
            fh.write(f",{labels[i]}\n")


def read_dense_csv(path, *, name: str | None = None) -> Dataset:
    """Read the dense CSV written by write_dense_csv ('#' comments skipped)."""
    rows: list[list[float]] = []
    labels: list[int] = []
    header: list[str] | None = None
    with open(path, "r", encoding="ascii") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split(",")
            if header is None:
                if parts[-1] != "label" or any(
                    parts[j] != f"f{j}" for j in range(len(parts) - 1)
                ):
                    raise _parse_error(lineno, "expected header f0,...,label")
                header = parts
                continue
            if len(parts) != len(header):
                raise _parse_error(
                    lineno, f"{len(parts)} fields, expected {len(header)}"
                )
            try:
                rows.append([float(v) for v in parts[:-1]])
                labels.append(int(float(parts[-1])))
            except ValueError:
                raise _parse_error(lineno, "bad numeric field") from None
    if header is None:
        raise ValueError(f"{path}: empty CSV, no header row")
    points = np.asarray(rows, dtype=np.float64).reshape(len(rows), len(header) - 1)
    lab = np.asarray(labels, dtype=np.int64)
    if np.all(lab == -1):
        lab = None
    return Dataset(name or str(path), points, lab)


def write_labels_csv(labels, path, *, header_lines: list[str] | None = None) -> None:
    """Cluster/class assignment CSV with columns point_id,label."""
    labels = np.asarray(labels, dtype=np.int64)
    with open_output(path) as fh:
        for line in header_lines or []:
            fh.write(f"# {line}\n")
        fh.write("point_id,label\n")
        for i, v in enumerate(labels):
            fh.write(f"{i},{v}\n")


def read_labels_csv(path) -> np.ndarray:
    """Read point_id,label CSV; rows may arrive in any point_id order."""
    pairs: list[tuple[int, int]] = []
    saw_header = False
    with open(path, "r", encoding="ascii") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if not saw_header:
                if line != "point_id,label":
                    raise _parse_error(lineno, "expected header point_id,label")
                saw_header = True
                continue
            parts = line.split(",")
            if len(parts) != 2:
                raise _parse_error(lineno, "expected point_id,label")
            try:
                pairs.append((int(parts[0]), int(parts[1])))
            except ValueError:
                raise _parse_error(lineno, "bad integer field") from None
    if not saw_header:
        raise ValueError(f"{path}: empty CSV, no header row")
    pairs.sort()
    ids = [p[0] for p in pairs]
    if ids != list(range(len(pairs))):
        raise ValueError(f"{path}: point_id values must cover 0..n-1 exactly once")
    return np.asarray([p[1] for p in pairs], dtype=np.int64)
