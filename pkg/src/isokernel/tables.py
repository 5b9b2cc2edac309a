"""Commented CSV tables, the output format every experiment shares.

A table file is zero or more '#' comment lines, one column-header row, then
data rows. Floats are written with shortest round-trip formatting, so
re-reading a table reproduces the original values exactly.
"""

from __future__ import annotations

import csv
import math
from contextlib import contextmanager
from dataclasses import dataclass, field


@contextmanager
def open_output(path_or_stream, encoding: str = "ascii"):
    """Yield a writable text stream; open `path_or_stream` when it is a path."""
    if hasattr(path_or_stream, "write"):
        yield path_or_stream
    else:
        with open(path_or_stream, "w", encoding=encoding, newline="") as fh:
            yield fh


def format_cell(value) -> str:
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return repr(value)
    return str(value)


def write_table(out, comments, columns, rows) -> None:
    """Write a commented CSV table to a path or stream."""
    columns = list(columns)
    with open_output(out) as fh:
        for line in comments:
            fh.write(f"# {line}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            cells = [format_cell(v) for v in row]
            if len(cells) != len(columns):
                raise ValueError(
                    f"row width {len(cells)} does not match "
                    f"{len(columns)} columns"
                )
            writer.writerow(cells)


@dataclass
class Table:
    comments: list[str] = field(default_factory=list)
    columns: list[str] = field(default_factory=list)
    rows: list[list[str]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.rows)

    def _col(self, name: str) -> int:
        try:
            return self.columns.index(name)
        except ValueError:
            raise ValueError(
                f"missing column {name!r}; table has {', '.join(self.columns)}"
            ) from None

    def column(self, name: str) -> list[str]:
        j = self._col(name)
        return [row[j] for row in self.rows]

    def floats(self, name: str) -> list[float]:
        return [float(v) for v in self.column(name)]

    def ints(self, name: str) -> list[int]:
        return [int(v) for v in self.column(name)]


def read_table(source) -> Table:
    """Read a commented CSV table from a path, stream, or literal text."""
    if isinstance(source, str) and "\n" in source:
        lines = source.splitlines()
    elif hasattr(source, "read"):
        lines = source.read().splitlines()
    else:
        with open(source, "r", encoding="ascii") as fh:
            lines = fh.read().splitlines()
    table = Table()
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        if line.startswith("#"):
            table.comments.append(line[1:].strip())
            continue
        cells = next(csv.reader([line]))
        if not table.columns:
            table.columns = cells
            continue
        if len(cells) != len(table.columns):
            raise ValueError(
                f"parse error at line {lineno}: expected "
                f"{len(table.columns)} cells, got {len(cells)}"
            )
        table.rows.append(cells)
    if not table.columns:
        raise ValueError("parse error at line 1: no header row")
    return table
