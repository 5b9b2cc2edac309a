"""Render nearest-neighbour instability curves across dimension.

Reads a CSV with columns ``measure, d, query_kind, variance_ratio,
n_epsilon`` (as written by ``isokernel instability``) and draws one row
of panels per query kind: the variance ratio of nearest-neighbour
distances on the left and the near-duplicate neighbour count on the
right, both against dimension on a log axis, one series per measure.

Usage: ``render_instability.py <csv> <out.png|out.svg>``
"""

from __future__ import annotations

import argparse
import sys

import matplotlib.pyplot as plt

from plotcore import MARKERS, numeric, read_table, save_figure

REQUIRED = ("measure", "d", "query_kind", "variance_ratio", "n_epsilon")


def render(csv_path: str, out_path: str) -> None:
    """Draw the instability figure for *csv_path* into *out_path*."""
    table = read_table(csv_path, required=REQUIRED)
    dims = numeric(table, "d", csv_path, cast=int)
    ratio = numeric(table, "variance_ratio", csv_path)
    n_eps = numeric(table, "n_epsilon", csv_path)
    measures = table["measure"]
    kinds = table["query_kind"]

    kind_order = sorted(set(kinds))
    measure_order = sorted(set(measures))
    panels = (
        (ratio, "variance ratio of NN distances", False),
        (n_eps, "neighbours within (1+eps) of d_min", True),
    )
    fig, axes = plt.subplots(
        len(kind_order),
        len(panels),
        figsize=(10.0, 3.4 * len(kind_order)),
        squeeze=False,
    )
    for row, kind in enumerate(kind_order):
        for col, (values, ylabel, log_y) in enumerate(panels):
            ax = axes[row][col]
            for m_idx, measure in enumerate(measure_order):
                series = sorted(
                    (dims[i], values[i])
                    for i in range(len(dims))
                    if measures[i] == measure and kinds[i] == kind
                )
                ax.plot(
                    [d for d, _ in series],
                    [v for _, v in series],
                    marker=MARKERS[m_idx % len(MARKERS)],
                    label=measure,
                )
            ax.set_xscale("log")
            if log_y:
                ax.set_yscale("log")
            ax.set_xlabel("dimension d")
            ax.set_ylabel(ylabel)
            ax.set_title(f"query: {kind.replace('_', ' ')}")
            ax.legend()
    fig.tight_layout()
    save_figure(fig, out_path)


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="render_instability.py", description=__doc__.splitlines()[0]
    )
    parser.add_argument("csv", help="instability CSV (measure,d,query_kind,...)")
    parser.add_argument("out", help="output image path (.png or .svg)")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        render(args.csv, args.out)
    except (ValueError, OSError) as exc:
        print(f"render_instability: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
