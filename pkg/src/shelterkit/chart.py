"""Static SVG bar chart emission for result scores.

Hand-rolled SVG keeps the output byte-deterministic; no plotting
dependency is involved.
"""
from __future__ import annotations

from xml.sax.saxutils import escape

_BAR_W = 18
_GAP = 6
_PLOT_H = 220
_MARGIN_L = 46
_MARGIN_T = 30
_MARGIN_B = 110


def svg_bar_chart(labels, values, path, title="", y_max=None) -> None:
    """Write a vertical bar chart of ``values`` labeled by ``labels``."""
    if len(labels) != len(values):
        raise ValueError("labels and values differ in length")
    n = len(values)
    top = y_max if y_max is not None else max(values, default=1.0) or 1.0
    width = _MARGIN_L + n * (_BAR_W + _GAP) + 20
    height = _MARGIN_T + _PLOT_H + _MARGIN_B
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" font-family="sans-serif" font-size="10">',
        f'<text x="{_MARGIN_L}" y="16" font-size="13">{escape(title)}</text>',
        f'<line x1="{_MARGIN_L}" y1="{_MARGIN_T}" x2="{_MARGIN_L}" '
        f'y2="{_MARGIN_T + _PLOT_H}" stroke="black"/>',
        f'<line x1="{_MARGIN_L}" y1="{_MARGIN_T + _PLOT_H}" '
        f'x2="{width - 10}" y2="{_MARGIN_T + _PLOT_H}" stroke="black"/>',
    ]
    for frac in (0.0, 0.25, 0.5, 0.75, 1.0):
        y = _MARGIN_T + _PLOT_H * (1 - frac)
        parts.append(
            f'<text x="{_MARGIN_L - 6}" y="{y + 3:.0f}" text-anchor="end">'
            f'{top * frac:.2f}</text>')
    for i, (label, value) in enumerate(zip(labels, values)):
        h = 0.0 if top == 0 else max(0.0, min(1.0, value / top)) * _PLOT_H
        x = _MARGIN_L + _GAP + i * (_BAR_W + _GAP)
        y = _MARGIN_T + _PLOT_H - h
        parts.append(
            f'<rect x="{x}" y="{y:.2f}" width="{_BAR_W}" height="{h:.2f}" '
            f'fill="#4878a8"/>')
        lx = x + _BAR_W / 2
        ly = _MARGIN_T + _PLOT_H + 8
        parts.append(
            f'<text x="{lx}" y="{ly}" text-anchor="end" '
            f'transform="rotate(-60 {lx} {ly})">{escape(str(label))}</text>')
    parts.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(parts) + "\n")
