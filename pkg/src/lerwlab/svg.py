"""Dependency-free SVG line/scatter plots for experiment summaries."""

from __future__ import annotations

import math
from html import escape

W, H, PAD = 560, 380, 60
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd")


def _ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    if hi <= lo:
        return [lo]
    return [lo + (hi - lo) * i / (count - 1) for i in range(count)]


def line_plot(series: dict, title: str = "", xlabel: str = "", ylabel: str = "",
              logx: bool = False, logy: bool = False, annotation: str = "") -> str:
    """``series`` maps a label to (xs, ys); non-finite or (on log axes)
    non-positive points are dropped."""

    def tx(v):
        return math.log(v) if logx else v

    def ty(v):
        return math.log(v) if logy else v

    clean = {}
    for label, (xs, ys) in series.items():
        pts = [(tx(x), ty(y)) for x, y in zip(xs, ys)
               if math.isfinite(x) and math.isfinite(y) and (not logx or x > 0) and (not logy or y > 0)]
        clean[label] = pts
    allp = [p for pts in clean.values() for p in pts] or [(0.0, 0.0)]
    x0, x1 = min(p[0] for p in allp), max(p[0] for p in allp)
    y0, y1 = min(p[1] for p in allp), max(p[1] for p in allp)
    if x1 == x0:
        x0, x1 = x0 - 1, x1 + 1
    if y1 == y0:
        y0, y1 = y0 - 1, y1 + 1

    def sx(v):
        return PAD + (v - x0) / (x1 - x0) * (W - 2 * PAD)

    def sy(v):
        return H - PAD - (v - y0) / (y1 - y0) * (H - 2 * PAD)

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" font-family="sans-serif" font-size="11">',
           f'<rect width="{W}" height="{H}" fill="white"/>',
           f'<line x1="{PAD}" y1="{H - PAD}" x2="{W - PAD}" y2="{H - PAD}" stroke="black"/>',
           f'<line x1="{PAD}" y1="{PAD}" x2="{PAD}" y2="{H - PAD}" stroke="black"/>']
    for v in _ticks(x0, x1):
        lab = f"{math.exp(v):.3g}" if logx else f"{v:.3g}"
        out.append(f'<text x="{sx(v):.1f}" y="{H - PAD + 16}" text-anchor="middle">{lab}</text>')
    for v in _ticks(y0, y1):
        lab = f"{math.exp(v):.3g}" if logy else f"{v:.3g}"
        out.append(f'<text x="{PAD - 6}" y="{sy(v) + 4:.1f}" text-anchor="end">{lab}</text>')
    for i, (label, pts) in enumerate(clean.items()):
        c = COLORS[i % len(COLORS)]
        if len(pts) > 1:
            d = " ".join(f"{sx(x):.1f},{sy(y):.1f}" for x, y in pts)
            out.append(f'<polyline points="{d}" fill="none" stroke="{c}"/>')
        for x, y in pts:
            out.append(f'<circle cx="{sx(x):.1f}" cy="{sy(y):.1f}" r="3" fill="{c}"/>')
        out.append(f'<text x="{W - PAD + 4}" y="{PAD + 14 * i}" fill="{c}">{escape(str(label))}</text>')
    out.append(f'<text x="{W / 2}" y="20" text-anchor="middle" font-size="14">{escape(title)}</text>')
    out.append(f'<text x="{W / 2}" y="{H - 18}" text-anchor="middle">{escape(xlabel)}</text>')
    out.append(f'<text x="16" y="{H / 2}" transform="rotate(-90 16 {H / 2})" text-anchor="middle">{escape(ylabel)}</text>')
    if annotation:
        out.append(f'<text x="{PAD + 8}" y="{PAD + 4}">{escape(annotation)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
