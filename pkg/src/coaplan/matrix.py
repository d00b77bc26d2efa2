"""Synchronization matrix: battlefield-function rows by time-period columns.

Both sides' actions are shown; enemy labels carry an "EN " prefix. An
action occupies every column its window overlaps; zero-duration actions
(events such as reaching a position already held) occupy the single
column containing their start minute.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from datetime import timedelta

from .kb import FUNCTION_ORDER
from .plan import Plan
from .scenario import CLOCK_FORMAT

CELL_JOIN = "; "


@dataclass(frozen=True)
class MatrixRow:
    function: str
    cells: tuple[tuple[str, ...], ...]  # one label tuple per column


@dataclass(frozen=True)
class SynchronizationMatrix:
    clock_start: str  # YYYY-MM-DDTHH:MM
    period_min: int
    column_labels: tuple[str, ...]  # wall-clock HH:MM of each period start
    rows: tuple[MatrixRow, ...]

    @property
    def columns(self) -> int:
        return len(self.column_labels)


def build_sync_matrix(p: Plan, period_min: int | None = None) -> SynchronizationMatrix:
    """Assumes `p` already passed check_consistency (every node scheduled)."""
    period = period_min if period_min is not None else p.config.sync_period_min
    if period < 1:
        raise ValueError("period must be >= 1 minute")

    spans = []
    for nid in sorted(p.nodes):
        n = p.nodes[nid]
        s, e = n.window  # type: ignore[misc]
        eff_end = e if e > s else s + 1
        label = f"{n.actor} {n.verb}"
        if n.side.value == "enemy":
            label = "EN " + label
        spans.append((s, eff_end, nid, n.function.value, label))

    horizon = max((e for _, e, _, _, _ in spans), default=0)
    n_cols = -(-horizon // period) if horizon else 0

    grid: dict[str, list[list[tuple[int, int, str]]]] = {
        fn.value: [[] for _ in range(n_cols)] for fn in FUNCTION_ORDER
    }
    for s, eff_end, nid, fn, label in spans:
        first = s // period
        last = (eff_end - 1) // period
        for col in range(first, last + 1):
            grid[fn][col].append((s, nid, label))

    rows = []
    for fn in FUNCTION_ORDER:
        cells = tuple(
            tuple(label for _, _, label in sorted(cell))
            for cell in grid[fn.value]
        )
        rows.append(MatrixRow(function=fn.value, cells=cells))

    labels = tuple(
        (p.scenario.clock_start + timedelta(minutes=c * period)).strftime("%H:%M")
        for c in range(n_cols)
    )
    return SynchronizationMatrix(
        clock_start=p.scenario.clock_start.strftime(CLOCK_FORMAT),
        period_min=period,
        column_labels=labels,
        rows=tuple(rows),
    )


def export_matrix(m: SynchronizationMatrix, format: str = "csv") -> str:
    """Byte-stable CSV or JSON rendering."""
    if format == "json":
        doc = {
            "clock_start": m.clock_start,
            "period_min": m.period_min,
            "columns": list(m.column_labels),
            "rows": [
                {"function": r.function, "cells": [list(c) for c in r.cells]}
                for r in m.rows
            ],
        }
        return json.dumps(doc, indent=2) + "\n"
    if format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, quoting=csv.QUOTE_ALL, lineterminator="\n")
        writer.writerow(["function", *m.column_labels])
        for r in m.rows:
            writer.writerow([r.function, *(CELL_JOIN.join(c) for c in r.cells)])
        return buf.getvalue()
    raise ValueError(f"unknown format {format!r}")


def load_matrix(text: str) -> SynchronizationMatrix:
    """Inverse of the JSON export; load(export(m)) == m."""
    doc = json.loads(text)
    return SynchronizationMatrix(
        clock_start=doc["clock_start"],
        period_min=doc["period_min"],
        column_labels=tuple(doc["columns"]),
        rows=tuple(
            MatrixRow(function=r["function"],
                      cells=tuple(tuple(c) for c in r["cells"]))
            for r in doc["rows"]
        ),
    )
