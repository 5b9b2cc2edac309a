"""Render k-occurrence distributions to show hub formation.

Reads a CSV with columns ``measure, d, o_k, p`` (as written by
``isokernel hubness``) and draws the share of points against their
k-occurrence count, one series per (measure, dimension) pair.  A long
right tail means a few points have become hubs that appear in many
other points' neighbour lists.

Usage: ``render_hubness.py <csv> <out.png|out.svg>``
"""

from __future__ import annotations

import argparse
import sys

import matplotlib.pyplot as plt

from plotcore import MARKERS, numeric, read_table, save_figure

REQUIRED = ("measure", "d", "o_k", "p")


def render(csv_path: str, out_path: str) -> None:
    """Draw the hubness figure for *csv_path* into *out_path*."""
    table = read_table(csv_path, required=REQUIRED)
    dims = numeric(table, "d", csv_path, cast=int)
    counts = numeric(table, "o_k", csv_path, cast=int)
    shares = numeric(table, "p", csv_path)
    measures = table["measure"]

    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    groups = sorted(set(zip(measures, dims)))
    for g_idx, (measure, d) in enumerate(groups):
        series = sorted(
            (counts[i], shares[i])
            for i in range(len(counts))
            if measures[i] == measure and dims[i] == d
        )
        ax.plot(
            [c for c, _ in series],
            [p for _, p in series],
            marker=MARKERS[g_idx % len(MARKERS)],
            markersize=4,
            label=f"{measure}, d={d}",
        )
    ax.set_xlabel("k-occurrence count O_k")
    ax.set_ylabel("share of points p(O_k)")
    ax.legend()
    fig.tight_layout()
    save_figure(fig, out_path)


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="render_hubness.py", description=__doc__.splitlines()[0]
    )
    parser.add_argument("csv", help="hubness CSV (measure,d,o_k,p)")
    parser.add_argument("out", help="output image path (.png or .svg)")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        render(args.csv, args.out)
    except (ValueError, OSError) as exc:
        print(f"render_hubness: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
