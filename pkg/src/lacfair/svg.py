"""Minimal SVG overlay plots: input black, initial guess blue, fit red."""

from __future__ import annotations

import numpy as np

COLORS = {"input": "#000000", "guess": "#0000ff", "fit": "#ff0000"}


def overlay_svg(curves: dict, width=800, pad=0.05) -> str:
    """Render named polylines (keys of :data:`COLORS` or ``(points, color)``) to SVG text.

    The y axis points up, as in the data.
    """
    items = []
    for name, pts in curves.items():
        if isinstance(pts, tuple):
            pts, color = pts
        else:
            color = COLORS.get(name, "#808080")
        items.append((name, np.asarray(pts, dtype=float), color))
    allpts = np.vstack([p for _, p, _ in items])
    lo, hi = allpts.min(axis=0), allpts.max(axis=0)
    span = max(float(np.max(hi - lo)), 1e-12)
    lo = lo - pad * span
    hi = hi + pad * span
    scale = width / float(hi[0] - lo[0]) if hi[0] > lo[0] else 1.0
    height = max(1.0, float(hi[1] - lo[1]) * scale)
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" height="{height:.0f}" '
        f'viewBox="0 0 {width:.0f} {height:.0f}">',
        '<rect width="100%" height="100%" fill="#ffffff"/>',
    ]
    for name, pts, color in items:
        xy = (pts - lo) * scale
        xy[:, 1] = height - xy[:, 1]
        path = " ".join(f"{x:.3f},{y:.3f}" for x, y in xy)
        lines.append(
            f'<polyline id="{name}" fill="none" stroke="{color}" stroke-width="1.5" points="{path}"/>'
        )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
