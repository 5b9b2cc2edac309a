"""Shared helpers for the offline figure renderers.

Each render script is a pure view of file contents: the helpers here
parse CSV tables written by the ``isokernel`` command line, check that
the columns a figure needs are present, and save the finished figure.
Nothing is recomputed or altered on the way to the page, and no output
file is created until the inputs have parsed cleanly.
"""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Callable, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be pinned first)
import numpy as np  # noqa: E402

__all__ = [
    "MARKERS",
    "load_points",
    "numeric",
    "read_labels",
    "read_table",
    "save_figure",
]

# One distinct marker per series, reused cyclically.
MARKERS = ("o", "s", "^", "D", "v", "P", "X", "*")


def read_table(path: str | Path, required: Sequence[str]) -> dict[str, list[str]]:
    """Read a comment-tolerant CSV into columns, checking the schema.

    Lines starting with ``#`` are skipped.  The first remaining line is
    the header; every later line is a data row.  Raises ``ValueError``
    when the body is empty, a required column is absent (the error names
    the column), or a row has the wrong number of fields.
    """
    path = Path(path)
    with path.open(newline="") as fh:
        rows = [row for row in csv.reader(fh) if row and not row[0].startswith("#")]
    if not rows:
        raise ValueError(f"empty CSV body in {path} (no header row)")
    header, body = rows[0], rows[1:]
    if not body:
        raise ValueError(f"empty CSV body in {path}")
    for name in required:
        if name not in header:
            raise ValueError(
                f"missing column '{name}' in {path}; found {', '.join(header)}"
            )
    columns: dict[str, list[str]] = {name: [] for name in header}
    for i, row in enumerate(body, start=1):
        if len(row) != len(header):
            raise ValueError(
                f"data row {i} of {path} has {len(row)} fields; expected {len(header)}"
            )
        for name, value in zip(header, row):
            columns[name].append(value)
    return columns


def numeric(
    table: dict[str, list[str]],
    name: str,
    path: str | Path,
    cast: Callable[[str], float] = float,
) -> list:
    """Convert one column of :func:`read_table` output to numbers."""
    try:
        return [cast(value) for value in table[name]]
    except ValueError as exc:
        raise ValueError(f"bad value in column '{name}' of {path}: {exc}") from None


def read_labels(path: str | Path) -> list[str]:
    """Read a ``point_id,label`` table and return labels ordered by point id."""
    table = read_table(path, required=("point_id", "label"))
    ids = numeric(table, "point_id", path, cast=int)
    pairs = sorted(zip(ids, table["label"]))
    if [i for i, _ in pairs] != list(range(len(pairs))):
        raise ValueError(f"point_id values in {path} are not 0..n-1 exactly once")
    return [label for _, label in pairs]


def load_points(path: str | Path) -> np.ndarray:
    """Load a LIBSVM-format point file as a dense ``(n, d)`` array."""
    from sklearn.datasets import load_svmlight_file

    points, _ = load_svmlight_file(str(path))
    return np.asarray(points.todense())


def save_figure(fig: plt.Figure, out_path: str | Path) -> None:
    """Save *fig* as PNG or SVG (chosen by extension) and close it."""
    out_path = Path(out_path)
    if out_path.suffix.lower() not in (".png", ".svg"):
        plt.close(fig)
        raise ValueError(
            f"unsupported image format '{out_path.suffix}'; use .png or .svg"
        )
    fig.savefig(out_path, dpi=150, bbox_inches="tight")
    plt.close(fig)
