"""
SVG rendering of optimal shapes and of the diagram
Plain text output, no plotting dependency
"""

import math
import logging
from typing import Dict, Iterable, List, Optional, Tuple
from xml.sax.saxutils import escape

import numpy as np

from convex_geometry import DiagramPoint
from diagram import SweepTable
from shooting import OptimalShape

logger = logging.getLogger(__name__)

MARGIN = 0.05
SHAPE_SIZE = 600
DIAGRAM_WIDTH = 800
DIAGRAM_HEIGHT = 600
FAMILY_COLORS = ["#1f77b4", "#2ca02c", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22"]


def _fmt(value: float) -> str:
    return f"{value:.6f}".rstrip("0").rstrip(".")


def _header(view: Tuple[float, float, float, float], width: int, height: int, title: str) -> List[str]:
    x0, y0, w, h = view
    return [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="{_fmt(x0)} {_fmt(y0)} {_fmt(w)} {_fmt(h)}">',
        f"<title>{escape(title)}</title>",
    ]


def _path(points: np.ndarray, closed: bool) -> str:
    head = f"M {_fmt(points[0, 0])} {_fmt(points[0, 1])}"
    body = " ".join(f"L {_fmt(x)} {_fmt(y)}" for x, y in points[1:])
    return f"{head} {body}{' Z' if closed else ''}"


def segment_runs(curvature: np.ndarray) -> List[Tuple[int, int]]:
    """Index ranges [start, stop] of maximal runs with zero curvature"""
    flat = np.asarray(curvature) == 0.0
    runs = []
    start = None
    for i, is_flat in enumerate(flat):
        if is_flat and start is None:
            start = i
        elif not is_flat and start is not None:
            runs.append((start, i - 1))
            start = None
    if start is not None:
        runs.append((start, flat.size - 1))
    return [(a, b) for a, b in runs if b > a]


def shape_svg(shape: OptimalShape, title: Optional[str] = None) -> str:
    """One closed path for the boundary; straight segments overlaid as red lines"""
    pts = shape.poly.vertices[:-1].copy()
    pts[:, 1] = -pts[:, 1]
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    extent = max(hi - lo)
    pad = MARGIN * extent
    view = (lo[0] - pad, lo[1] - pad, hi[0] - lo[0] + 2 * pad, hi[1] - lo[1] + 2 * pad)
    stroke = _fmt(extent / 300.0)

    title = title or f"mu={shape.mu:g} mode={shape.mode.value} objective={shape.objective:.10g}"
    lines = _header(view, SHAPE_SIZE, SHAPE_SIZE, title)
    lines.append(f'<path d="{_path(pts, closed=True)}" fill="#dde8f5" stroke="#1f3b73" '
                 f'stroke-width="{stroke}"/>')
    for a, b in segment_runs(shape.curvature[:-1]):
        lines.append(
            f'<line class="segment" x1="{_fmt(pts[a, 0])}" y1="{_fmt(pts[a, 1])}" '
            f'x2="{_fmt(pts[b, 0])}" y2="{_fmt(pts[b, 1])}" stroke="#d62728" '
            f'stroke-width="{_fmt(3 * float(stroke))}"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


class _Axes:
    """Maps diagram coordinates to pixels (y up)"""

    def __init__(self, x_range: Tuple[float, float], y_range: Tuple[float, float]):
        self.x_range = x_range
        self.y_range = y_range
        self.left, self.right = 60.0, DIAGRAM_WIDTH - 20.0
        self.top, self.bottom = 20.0, DIAGRAM_HEIGHT - 50.0

    def __call__(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        (x0, x1), (y0, y1) = self.x_range, self.y_range
        px = self.left + (np.asarray(x) - x0) / (x1 - x0) * (self.right - self.left)
        py = self.bottom - (np.asarray(y) - y0) / (y1 - y0) * (self.bottom - self.top)
        return np.column_stack([px, py])

    def inside(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        (x0, x1), (y0, y1) = self.x_range, self.y_range
        return (x >= x0) & (x <= x1) & (y >= y0) & (y <= y1)


def _polyline(axes: _Axes, x: np.ndarray, y: np.ndarray, color: str, width: float = 1.5,
              dash: Optional[str] = None, css: str = "") -> Optional[str]:
    keep = axes.inside(x, y)
    if keep.sum() < 2:
        return None
    pts = axes(x[keep], y[keep])
    dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
    class_attr = f' class="{css}"' if css else ""
    return (f'<path{class_attr} d="{_path(pts, closed=False)}" fill="none" stroke="{color}" '
            f'stroke-width="{width}"{dash_attr}/>')


def diagram_svg(table: SweepTable, families: Iterable[DiagramPoint] = (), rho: Optional[float] = None,
                y_max: Optional[float] = None) -> str:
    """Solved locus, interior family curves, and the hyperbolas xy = 1 and xy = rho^2/pi^2"""
    solved = table.points()
    by_n: Dict[int, List[DiagramPoint]] = {}
    for p in families:
        by_n.setdefault(p.n or 0, []).append(p)

    ys = [p.y for p in solved] + [1.5]
    y_top = y_max or max(2.0, min(max(ys) * 1.05, 10.0))
    axes = _Axes((0.0, 1.05), (0.95, y_top))
    view = (0.0, 0.0, float(DIAGRAM_WIDTH), float(DIAGRAM_HEIGHT))
    lines = _header(view, DIAGRAM_WIDTH, DIAGRAM_HEIGHT, "Diagram of (4 pi A / P^2, E P / (2 pi^2))")

    # axes and ticks
    origin = axes(np.array([0.0]), np.array([0.95]))[0]
    lines.append(f'<line x1="{_fmt(axes.left)}" y1="{_fmt(origin[1])}" x2="{_fmt(axes.right)}" '
                 f'y2="{_fmt(origin[1])}" stroke="black"/>')
    lines.append(f'<line x1="{_fmt(axes.left)}" y1="{_fmt(axes.top)}" x2="{_fmt(axes.left)}" '
                 f'y2="{_fmt(axes.bottom)}" stroke="black"/>')
    for tick in np.arange(0.0, 1.01, 0.2):
        px = axes(np.array([tick]), np.array([0.95]))[0]
        lines.append(f'<text x="{_fmt(px[0])}" y="{_fmt(px[1] + 18)}" font-size="12" '
                     f'text-anchor="middle">{tick:.1f}</text>')
    for tick in np.arange(1.0, y_top + 1e-9, 0.5 if y_top <= 4 else 1.0):
        py = axes(np.array([0.0]), np.array([tick]))[0]
        lines.append(f'<text x="{_fmt(axes.left - 8)}" y="{_fmt(py[1] + 4)}" font-size="12" '
                     f'text-anchor="end">{tick:.1f}</text>')

    xs = np.linspace(0.02, 1.05, 400)
    gage = _polyline(axes, xs, 1.0 / xs, "#444444", 1.0, "6 4", "gage")
    if gage:
        lines.append(gage)
    if rho is not None:
        level = (rho / math.pi) ** 2
        asym = _polyline(axes, xs, level / xs, "#ff7f0e", 1.0, "2 3", "asymptote")
        if asym:
            lines.append(asym)

    for i, (n, pts) in enumerate(sorted(by_n.items())):
        fx = np.array([p.x for p in pts])
        fy = np.array([p.y for p in pts])
        order = np.argsort(fx)
        curve = _polyline(axes, fx[order], fy[order], FAMILY_COLORS[i % len(FAMILY_COLORS)], 1.0,
                          css=f"family-{n}")
        if curve:
            lines.append(curve)

    if solved:
        sx = np.array([p.x for p in solved])
        sy = np.array([p.y for p in solved])
        locus = _polyline(axes, sx, sy, "#d62728", 2.5, css="boundary")
        if locus:
            lines.append(locus)
        for px, py in axes(sx[axes.inside(sx, sy)], sy[axes.inside(sx, sy)]):
            lines.append(f'<circle cx="{_fmt(px)}" cy="{_fmt(py)}" r="2.5" fill="#d62728"/>')

    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def write_svg(path: str, text: str):
    with open(path, "w", encoding="utf-8") as f:
        f.write(text)
    logger.info("Wrote %s", path)
