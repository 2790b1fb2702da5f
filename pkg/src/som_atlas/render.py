"""Deterministic heatmap rendering of planes and cluster maps.

Values map through a black -> red -> yellow ramp: black at 0, pure red at
0.5, yellow at 1, with the blue channel fixed at zero. Maps are drawn as
pointy-top hexagons in odd-r offset layout. All output is byte-deterministic:
fixed element order, fixed 6-digit decimal formatting, no timestamps.
"""

from __future__ import annotations

import math
import warnings
from typing import Sequence

import numpy as np

from .hexgrid import HexGrid

_SQRT3 = math.sqrt(3.0)

# Categorical colors for cluster maps; cycled when k exceeds 12.
CLUSTER_PALETTE = (
    (31, 119, 180),
    (255, 127, 14),
    (44, 160, 44),
    (214, 39, 40),
    (148, 103, 189),
    (140, 86, 75),
    (227, 119, 194),
    (127, 127, 127),
    (188, 189, 34),
    (23, 190, 207),
    (174, 199, 232),
    (255, 187, 120),
)


def colormap(t: float) -> tuple[int, int, int]:
    """Map t in [0, 1] to the black/red/yellow ramp.

    Piecewise linear: red rises over [0, 0.5], green over (0.5, 1]. Rounding
    is half away from zero so 0.75 lands on (255, 128, 0). Out-of-range
    inputs clamp with a warning; NaN is an error.
    """
    if math.isnan(t):
        raise ValueError("colormap input is NaN")
    if t < 0.0 or t > 1.0:
        warnings.warn(f"colormap input {t} outside [0, 1]; clamped", stacklevel=2)
        t = min(1.0, max(0.0, t))
    if t <= 0.5:
        return (_round_half_away(510.0 * t), 0, 0)
    return (255, _round_half_away(510.0 * (t - 0.5)), 0)


def _round_half_away(x: float) -> int:
    # x is non-negative here, so half away from zero is floor(x + 0.5).
    return int(math.floor(x + 0.5))


def render_plane(plane, grid: HexGrid, format: str = "svg", cell_radius: float = 12.0) -> bytes:
    """Render one component plane as a hex heatmap; returns image bytes."""
    values = np.asarray(plane.values, dtype=np.float64)
    if values.shape != (grid.height, grid.width):
        raise ValueError(
            f"plane shape {values.shape} does not match grid "
            f"{grid.height}x{grid.width} (rows x cols)"
        )
    flat = values.reshape(-1)
    fills = [colormap(float(v)) for v in flat]
    caption = f"values min={flat.min():.6f} max={flat.max():.6f}"
    return _render(fills, grid, format, cell_radius, caption)


def render_cluster_map(
    labels: Sequence[int], grid: HexGrid, format: str = "svg", cell_radius: float = 12.0
) -> bytes:
    """Render cluster labels as a categorical hex map."""
    labels = np.asarray(labels)
    if labels.shape != (grid.n_nodes,):
        raise ValueError(f"{labels.shape[0] if labels.ndim else 0} labels for {grid.n_nodes} neurons")
    fills = [CLUSTER_PALETTE[int(lab) % len(CLUSTER_PALETTE)] for lab in labels]
    return _render(fills, grid, format, cell_radius, None)


def _render(fills, grid, format, cell_radius, caption):
    if cell_radius <= 0:
        raise ValueError("cell_radius must be positive")
    if format == "svg":
        return _render_svg(fills, grid, cell_radius, caption)
    if format == "ppm":
        return _render_ppm(fills, grid, cell_radius)
    raise ValueError(f"unknown format {format!r}; expected 'svg' or 'ppm'")


def _canvas_size(grid: HexGrid, r: float) -> tuple[float, float]:
    return _SQRT3 * r * (grid.width + 0.5), r * (1.5 * (grid.height - 1) + 2.0)


def _hex_center(row: int, col: int, r: float) -> tuple[float, float]:
    cx = _SQRT3 * r * (col + 0.5 * (row & 1)) + _SQRT3 * r * 0.5
    cy = 1.5 * r * row + r
    return cx, cy


def _hex_corners(cx: float, cy: float, r: float) -> list[tuple[float, float]]:
    pts = []
    for i in range(6):
        ang = math.radians(60.0 * i - 30.0)
        pts.append((cx + r * math.cos(ang), cy + r * math.sin(ang)))
    return pts


def _render_svg(fills, grid, r, caption) -> bytes:
    w, h = _canvas_size(grid, r)
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w:.6f}" height="{h:.6f}" '
        f'viewBox="0 0 {w:.6f} {h:.6f}">',
    ]
    if caption is not None:
        lines.append(f"<!-- {caption} -->")
    for idx in range(grid.n_nodes):
        row, col = divmod(idx, grid.width)
        cx, cy = _hex_center(row, col, r)
        pts = " ".join(f"{x:.6f},{y:.6f}" for x, y in _hex_corners(cx, cy, r))
        red, green, blue = fills[idx]
        lines.append(f'<polygon points="{pts}" fill="rgb({red},{green},{blue})"/>')
    lines.append("</svg>")
    return ("\n".join(lines) + "\n").encode("utf-8")


def _render_ppm(fills, grid, r) -> bytes:
    w, h = _canvas_size(grid, r)
    pw, ph = math.ceil(w), math.ceil(h)
    raster = np.full((ph, pw, 3), 255, dtype=np.uint8)

    half_width = _SQRT3 * r / 2.0
    for idx in range(grid.n_nodes):
        row, col = divmod(idx, grid.width)
        cx, cy = _hex_center(row, col, r)
        y0 = max(0, math.floor(cy - r))
        y1 = min(ph, math.ceil(cy + r))
        x0 = max(0, math.floor(cx - half_width))
        x1 = min(pw, math.ceil(cx + half_width))
        color = np.asarray(fills[idx], dtype=np.uint8)
        for py in range(y0, y1):
            dy = (py + 0.5) - cy
            for px in range(x0, x1):
                dx = (px + 0.5) - cx
                # Point-in-hexagon for a pointy-top cell of circumradius r.
                if abs(dx) <= half_width and abs(dy) <= r - abs(dx) / _SQRT3:
                    raster[py, px] = color

    out = [f"P3\n{pw} {ph}\n255"]
    for py in range(ph):
        for px in range(pw):
            red, green, blue = raster[py, px]
            out.append(f"{red} {green} {blue}")
    return ("\n".join(out) + "\n").encode("ascii")
