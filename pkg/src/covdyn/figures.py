"""Matplotlib rendering of array windows to image files.

Figures mirror the text dumps: one horizontal band per level (top row
first), vertical lines at cut columns, block labels centered.  Rendering is
headless; callers get back the path they asked for.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .render import RowView


def render_rows_figure(
    rows: Sequence[RowView], path: str | Path, title: str | None = None
) -> Path:
    """Draw the rows as stacked bands and save the figure to ``path``."""
    if not rows:
        raise ValueError("nothing to draw")
    width = len(rows[0].cells)
    fig_w = min(1.5 + 0.45 * width, 18.0)
    fig_h = 0.8 + 0.55 * len(rows)
    fig, ax = plt.subplots(figsize=(fig_w, fig_h))

    for band, row in enumerate(rows):
        y_top = -band
        y_bot = -band - 1
        ax.hlines([y_top, y_bot], 0, width, color="black", linewidth=0.8)
        for offset in range(width + 1):
            absolute = row.start + offset
            boundary = offset in (0, width) or absolute in row.cuts
            if boundary:
                ax.vlines(offset, y_bot, y_top, color="black", linewidth=0.8)
        # one centered label per constant run; per-cell labels otherwise
        run_start = 0
        for offset in range(1, width + 1):
            at_cut = offset == width or (row.start + offset) in row.cuts
            if at_cut:
                run = row.cells[run_start:offset]
                if len(set(run)) == 1:
                    spots = [((run_start + offset) / 2, run[0])]
                else:
                    spots = [(run_start + k + 0.5, c) for k, c in enumerate(run)]
                for x, text in spots:
                    ax.text(
                        x,
                        (y_top + y_bot) / 2,
                        text,
                        ha="center",
                        va="center",
                        fontsize=9,
                    )
                run_start = offset
        ax.text(
            -0.4,
            (y_top + y_bot) / 2,
            row.name,
            ha="right",
            va="center",
            fontsize=9,
        )

    ax.set_xlim(-2.5, width + 0.5)
    ax.set_ylim(-len(rows) - 0.5, 0.5)
    ax.axis("off")
    if title:
        ax.set_title(title, fontsize=10)
    fig.tight_layout()
    out = Path(path)
    fig.savefig(out, dpi=150)
    plt.close(fig)
    return out
