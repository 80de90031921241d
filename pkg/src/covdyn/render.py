"""Text and key-value rendering of array windows and BV rows.

Windows print like the linked-array pictures: one line per level, top row
first, with ``|`` separators exactly at the cut columns.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .arrays import ArrayWindow, LinkedArrayWindow, NSymbol
from .bratteli import SymbolRow


@dataclass(frozen=True)
class RowView:
    """A renderable row: cell texts over a window plus absolute cut columns."""

    name: str
    start: int
    cells: tuple[str, ...]
    cuts: frozenset[int]


def circuit_label(level: int, index: int) -> str:
    return f"c{level}.{index}" if level > 0 else "e0"


def _candidate_text(level: int, candidates: tuple[int, ...]) -> str:
    if len(candidates) == 1:
        return circuit_label(level, candidates[0])
    if not candidates:
        return "?"
    return "{" + ",".join(circuit_label(level, t) for t in candidates) + "}"


def rows_from_linked(window: LinkedArrayWindow) -> list[RowView]:
    views = []
    for row in window.rows:
        cells = tuple(_candidate_text(row.level, c) for c in row.labels)
        views.append(
            RowView(f"row {row.level}", row.start, cells, frozenset(row.cuts))
        )
    return views


def rows_from_array(window: ArrayWindow) -> list[RowView]:
    return [
        RowView(f"row {n}", window.start, tuple(row), frozenset())
        for n, row in enumerate(window.rows)
    ]


def rows_from_symbol(symbol: NSymbol) -> list[RowView]:
    views = []
    for row in symbol.rows:
        cols, cuts = row.to_columns()
        cells = tuple(circuit_label(row.level, t) for t in cols)
        views.append(RowView(f"row {row.level}", 0, cells, frozenset(cuts)))
    return views


def rows_from_bv(rows: Sequence[SymbolRow]) -> list[RowView]:
    return [
        RowView(
            f"row {row.level}",
            row.start,
            row.values,
            frozenset(row.cuts),
        )
        for row in rows
    ]


def render_text(rows: Sequence[RowView]) -> str:
    """Column-aligned window rendering, cuts drawn as separators."""
    width = max((len(c) for row in rows for c in row.cells), default=1)
    name_width = max((len(row.name) for row in rows), default=4)
    lines = []
    for row in rows:
        parts = [f"{row.name:<{name_width}} "]
        for offset, cell in enumerate(row.cells):
            sep = "|" if row.start + offset in row.cuts else " "
            parts.append(f"{sep}{cell:<{width}}")
        lines.append("".join(parts).rstrip())
    return "\n".join(lines) + "\n"


def render_kv(rows: Sequence[RowView], prefix: str = "row") -> list[tuple[str, str]]:
    """Line-oriented key-value dump of the same rows."""
    records: list[tuple[str, str]] = []
    if rows:
        records.append((f"{prefix}s", str(len(rows))))
        records.append(("window.start", str(rows[0].start)))
        records.append(("window.width", str(len(rows[0].cells))))
    for k, row in enumerate(rows):
        records.append((f"{prefix}.{k}.name", row.name))
        records.append((f"{prefix}.{k}.cells", " ".join(row.cells)))
        cuts = " ".join(str(c) for c in sorted(row.cuts))
        records.append((f"{prefix}.{k}.cuts", cuts))
    return records
