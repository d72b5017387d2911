"""Standalone SVG heatmaps of transport plans.

Rows are the first domain, columns the second; cells are shaded white-to-dark
by entry relative to the plan maximum. Pure string assembly from the plan
values, so the same plan always yields byte-identical output.
"""

from __future__ import annotations

from pathlib import Path
from xml.sax.saxutils import escape

from .io import PlanFile

CELL = 24
FONT = 12
PAD = 10


def _cell_fill(value: float, peak: float) -> str:
    intensity = value / peak if peak > 0.0 else 0.0
    gray = 255 - int(round(255.0 * intensity))
    return f"#{gray:02x}{gray:02x}{gray:02x}"


def render_heatmap(plan: PlanFile, path) -> None:
    """Write an SVG grid of the plan, labels on both axes, exact values as tooltips."""
    entries = plan.entries
    n, m = entries.shape
    peak = float(entries.max())
    left = PAD + FONT * max(len(s) for s in plan.row_labels)
    top = PAD + FONT * max(len(s) for s in plan.col_labels)
    width = left + m * CELL + PAD
    height = top + n * CELL + PAD

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>',
    ]
    for j, label in enumerate(plan.col_labels):
        cx = left + j * CELL + CELL // 2 + FONT // 3
        parts.append(
            f'<text x="{cx}" y="{top - 4}" font-family="monospace" font-size="{FONT}" '
            f'transform="rotate(-90 {cx} {top - 4})">{escape(label)}</text>'
        )
    for i, label in enumerate(plan.row_labels):
        cy = top + i * CELL + CELL // 2 + FONT // 3
        parts.append(
            f'<text x="{left - 4}" y="{cy}" font-family="monospace" font-size="{FONT}" '
            f'text-anchor="end">{escape(label)}</text>'
        )
    for i in range(n):
        for j in range(m):
            value = float(entries[i, j])
            x = left + j * CELL
            y = top + i * CELL
            tooltip = escape(f"{plan.row_labels[i]} -> {plan.col_labels[j]}: {value!r}")
            parts.append(
                f'<rect x="{x}" y="{y}" width="{CELL}" height="{CELL}" '
                f'fill="{_cell_fill(value, peak)}" stroke="#cccccc" stroke-width="1">'
                f"<title>{tooltip}</title></rect>"
            )
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts) + "\n")
