"""Render neighbour-count convergence against the number of partitionings.

Reads a CSV with columns ``t, source, mean_n_eps`` (as written by
``isokernel vary-t``) and draws the mean near-duplicate neighbour count
against t on a log axis, one series per point source.  When a ``stderr``
column is present each point gets an error bar.

Usage: ``render_tsweep.py <csv> <out.png|out.svg>``
"""

from __future__ import annotations

import argparse
import sys

import matplotlib.pyplot as plt

from plotcore import MARKERS, numeric, read_table, save_figure

REQUIRED = ("t", "source", "mean_n_eps")


def render(csv_path: str, out_path: str) -> None:
    """Draw the t-sweep figure for *csv_path* into *out_path*."""
    table = read_table(csv_path, required=REQUIRED)
    t_values = numeric(table, "t", csv_path, cast=int)
    means = numeric(table, "mean_n_eps", csv_path)
    errors = numeric(table, "stderr", csv_path) if "stderr" in table else None
    sources = table["source"]

    fig, ax = plt.subplots(figsize=(6.5, 4.5))
    for s_idx, source in enumerate(sorted(set(sources))):
        rows = sorted(i for i in range(len(t_values)) if sources[i] == source)
        rows.sort(key=lambda i: t_values[i])
        ax.errorbar(
            [t_values[i] for i in rows],
            [means[i] for i in rows],
            yerr=[errors[i] for i in rows] if errors is not None else None,
            marker=MARKERS[s_idx % len(MARKERS)],
            capsize=3,
            label=source.replace("_", " "),
        )
    ax.set_xscale("log")
    ax.set_xlabel("number of partitionings t")
    ax.set_ylabel("mean neighbours within (1+eps) of d_min")
    ax.legend()
    fig.tight_layout()
    save_figure(fig, out_path)


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="render_tsweep.py", description=__doc__.splitlines()[0]
    )
    parser.add_argument("csv", help="t-sweep CSV (t,source,mean_n_eps,...)")
    parser.add_argument("out", help="output image path (.png or .svg)")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        render(args.csv, args.out)
    except (ValueError, OSError) as exc:
        print(f"render_tsweep: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
