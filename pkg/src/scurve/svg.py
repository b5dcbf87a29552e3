"""Minimal static SVG line charts (polylines, markers, log-scale axis)."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from xml.sax.saxutils import escape

COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


@dataclass
class Series:
    name: str
    x: list
    y: list
    markers: bool = False
    line: bool = True


@dataclass
class Chart:
    title: str = ""
    xlabel: str = ""
    ylabel: str = ""
    log_y: bool = False
    width: int = 640
    height: int = 400
    series: list = field(default_factory=list)

    def add(self, name, x, y, markers=False, line=True):
        self.series.append(Series(name, [float(v) for v in x], [float(v) for v in y],
                                  markers, line))
        return self

    def render(self) -> str:
        return render(self)


def _nice_ticks(lo, hi, n=5):
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / n
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 5, 10) if m * mag >= raw), default=10 * mag)
    start = math.ceil(lo / step) * step
    ticks = []
    v = start
    while v <= hi + 1e-9 * step:
        ticks.append(round(v, 12))
        v += step
    return ticks


def _fmt(v):
    if v == 0:
        return "0"
    if abs(v) >= 1e4 or abs(v) < 1e-2:
        return f"{v:.0e}".replace("e+0", "e").replace("e-0", "e-")
    return f"{v:g}"


def render(chart: Chart) -> str:
    left, right, top, bottom = 70, 130, 40, 50
    w, h = chart.width, chart.height
    pw, ph = w - left - right, h - top - bottom

    xs = [v for s in chart.series for v in s.x]
    ys = [v for s in chart.series for v in s.y if not chart.log_y or v > 0]
    if not xs or not ys:
        raise ValueError("chart has no plottable data")
    x0, x1 = min(xs), max(xs)
    if x1 == x0:
        x1 = x0 + 1
    if chart.log_y:
        y0 = math.floor(math.log10(min(ys)))
        y1 = math.ceil(math.log10(max(ys)))
        if y1 == y0:
            y1 += 1
        yticks = [10.0**e for e in range(y0, y1 + 1)]

        def ty(v):
            return top + ph * (1 - (math.log10(v) - y0) / (y1 - y0))
    else:
        y0, y1 = min(0.0, min(ys)), max(ys)
        if y1 == y0:
            y1 = y0 + 1
        yticks = _nice_ticks(y0, y1)

        def ty(v):
            return top + ph * (1 - (v - y0) / (y1 - y0))

    def tx(v):
        return left + pw * (v - x0) / (x1 - x0)

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" '
           f'viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="11">',
           f'<rect width="{w}" height="{h}" fill="white"/>']
    if chart.title:
        out.append(f'<text x="{w / 2:.1f}" y="20" text-anchor="middle" font-size="14">'
                   f'{escape(chart.title)}</text>')
    out.append(f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" '
               f'fill="none" stroke="#333"/>')
    for v in yticks:
        y = ty(v)
        out.append(f'<line x1="{left}" y1="{y:.2f}" x2="{left + pw}" y2="{y:.2f}" stroke="#ddd"/>')
        out.append(f'<text x="{left - 6}" y="{y + 4:.2f}" text-anchor="end">{_fmt(v)}</text>')
    for v in _nice_ticks(x0, x1):
        x = tx(v)
        out.append(f'<line x1="{x:.2f}" y1="{top + ph}" x2="{x:.2f}" y2="{top + ph + 5}" stroke="#333"/>')
        out.append(f'<text x="{x:.2f}" y="{top + ph + 18}" text-anchor="middle">{_fmt(v)}</text>')
    if chart.xlabel:
        out.append(f'<text x="{left + pw / 2:.1f}" y="{h - 10}" text-anchor="middle">'
                   f'{escape(chart.xlabel)}</text>')
    if chart.ylabel:
        out.append(f'<text x="16" y="{top + ph / 2:.1f}" text-anchor="middle" '
                   f'transform="rotate(-90 16 {top + ph / 2:.1f})">{escape(chart.ylabel)}</text>')

    for i, s in enumerate(chart.series):
        color = COLORS[i % len(COLORS)]
        pts = [(tx(a), ty(b)) for a, b in zip(s.x, s.y) if not chart.log_y or b > 0]
        if s.line and len(pts) > 1:
            coords = " ".join(f"{a:.2f},{b:.2f}" for a, b in pts)
            out.append(f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        if s.markers:
            out.extend(f'<circle cx="{a:.2f}" cy="{b:.2f}" r="3" fill="none" stroke="{color}"/>'
                       for a, b in pts)
        ly = top + 12 + 16 * i
        out.append(f'<line x1="{left + pw + 10}" y1="{ly}" x2="{left + pw + 28}" y2="{ly}" '
                   f'stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{left + pw + 32}" y="{ly + 4}">{escape(s.name)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
