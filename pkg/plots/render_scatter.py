"""Render a two-coordinate scatter of a point set coloured by cluster label.

Reads a LIBSVM-format point file (as written by ``isokernel gen``) and a
``point_id,label`` CSV (as written by ``isokernel cluster-dp``) and
scatters two chosen coordinates with one colour per label.  The default
coordinates 0 and 1 suit the two-cluster disjoint-subspace dataset,
whose clusters live on separate axes with very different spreads.

Usage: ``render_scatter.py <points.libsvm> <labels.csv> <out.png|out.svg>``
"""

from __future__ import annotations

import argparse
import sys

import matplotlib.pyplot as plt
import numpy as np

from plotcore import MARKERS, load_points, read_labels, save_figure


def _label_order(labels: list[str]) -> list[str]:
    unique = set(labels)
    try:
        return sorted(unique, key=int)
    except ValueError:
        return sorted(unique)


def render(
    data_path: str, labels_path: str, out_path: str, x: int = 0, y: int = 1
) -> None:
    """Scatter coordinates *x* and *y* of *data_path*, coloured by label."""
    points = load_points(data_path)
    labels = read_labels(labels_path)
    if len(labels) != len(points):
        raise ValueError(
            f"length mismatch: {len(points)} points in {data_path} "
            f"vs {len(labels)} labels in {labels_path}"
        )
    for axis in (x, y):
        if not 0 <= axis < points.shape[1]:
            raise ValueError(
                f"axis {axis} out of range for {points.shape[1]}-dimensional points"
            )

    fig, ax = plt.subplots(figsize=(6.0, 6.0))
    for l_idx, label in enumerate(_label_order(labels)):
        mask = np.array([lab == label for lab in labels])
        ax.scatter(
            points[mask, x],
            points[mask, y],
            s=14,
            alpha=0.75,
            marker=MARKERS[l_idx % len(MARKERS)],
            label=f"cluster {label}",
        )
    ax.set_xlabel(f"coordinate {x}")
    ax.set_ylabel(f"coordinate {y}")
    ax.legend()
    fig.tight_layout()
    save_figure(fig, out_path)


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="render_scatter.py", description=__doc__.splitlines()[0]
    )
    parser.add_argument("data", help="LIBSVM-format point file")
    parser.add_argument("labels", help="labels CSV (point_id,label)")
    parser.add_argument("out", help="output image path (.png or .svg)")
    parser.add_argument("--x", type=int, default=0, help="coordinate for the x axis")
    parser.add_argument("--y", type=int, default=1, help="coordinate for the y axis")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        render(args.data, args.labels, args.out, x=args.x, y=args.y)
    except (ValueError, OSError) as exc:
        print(f"render_scatter: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
