"""Deterministic SVG scatter of model fit against model complexity."""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

from .pareto import FrontierReport

__all__ = ["render_frontier_svg"]

WIDTH, HEIGHT = 640, 480
LEFT, RIGHT, TOP, BOTTOM = 80, 170, 30, 60


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def _nice_ticks(lo: float, hi: float, target: int = 6) -> list:
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / target
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw), default=10 * mag)
    start = math.ceil(lo / step) * step
    ticks = []
    t = start
    while t <= hi + 1e-9 * step:
        ticks.append(round(t, 10))
        t += step
    return ticks


def _tick_label(v: float) -> str:
    return str(int(v)) if float(v).is_integer() else f"{v:g}"


def render_frontier_svg(report: FrontierReport, highlight: str | None = None,
                        title: str = "Model fit vs. model complexity",
                        xlabel: str = "f2: number of parameters",
                        ylabel: str = "f1: negative log-likelihood") -> str:
    """Render every point of ``report``; frontier points filled and joined.

    ``highlight`` is a model id to ring (e.g. a criterion's top model). The
    output depends only on the inputs, so identical reports give identical
    bytes.
    """
    pts = report.all_points
    f2s = [pt.f2 for pt in pts]
    f1s = [pt.f1 for pt in pts]
    x_lo, x_hi = min(f2s), max(f2s)
    y_lo, y_hi = min(f1s), max(f1s)
    xpad = max((x_hi - x_lo) * 0.05, 0.5)
    ypad = max((y_hi - y_lo) * 0.05, 0.5)
    x_lo, x_hi, y_lo, y_hi = x_lo - xpad, x_hi + xpad, y_lo - ypad, y_hi + ypad
    pw, ph = WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM

    def sx(v):
        return LEFT + (v - x_lo) / (x_hi - x_lo) * pw

    def sy(v):
        return TOP + ph - (v - y_lo) / (y_hi - y_lo) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f"<title>{escape(title)}</title>",
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        '<g class="axes" stroke="black" fill="none">',
        f'<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}"/>',
    ]
    xticks = _nice_ticks(x_lo, x_hi)
    yticks = _nice_ticks(y_lo, y_hi)
    for t in xticks:
        out.append(f'<line x1="{_fmt(sx(t))}" y1="{TOP + ph}" x2="{_fmt(sx(t))}" y2="{TOP + ph + 5}"/>')
    for t in yticks:
        out.append(f'<line x1="{LEFT - 5}" y1="{_fmt(sy(t))}" x2="{LEFT}" y2="{_fmt(sy(t))}"/>')
    out.append("</g>")
    out.append('<g class="tick-labels" fill="black">')
    for t in xticks:
        out.append(f'<text x="{_fmt(sx(t))}" y="{TOP + ph + 18}" text-anchor="middle">{_tick_label(t)}</text>')
    for t in yticks:
        out.append(f'<text x="{LEFT - 8}" y="{_fmt(sy(t) + 4)}" text-anchor="end">{_tick_label(t)}</text>')
    out.append("</g>")
    out.append(f'<text class="xlabel" x="{_fmt(LEFT + pw / 2)}" y="{HEIGHT - 15}" '
               f'text-anchor="middle">{escape(xlabel)}</text>')
    out.append(f'<text class="ylabel" x="20" y="{_fmt(TOP + ph / 2)}" text-anchor="middle" '
               f'transform="rotate(-90 20 {_fmt(TOP + ph / 2)})">{escape(ylabel)}</text>')

    line = " ".join(f"{_fmt(sx(pt.f2))},{_fmt(sy(pt.f1))}" for pt in report.frontier)
    out.append(f'<polyline class="frontier-line" points="{line}" fill="none" '
               f'stroke="black" stroke-width="1.5"/>')

    out.append('<g class="points">')
    for pt in report.dominated:
        out.append(f'<circle class="dominated" cx="{_fmt(sx(pt.f2))}" cy="{_fmt(sy(pt.f1))}" '
                   f'r="4" fill="none" stroke="black"><title>{escape(pt.model_id)}</title></circle>')
    for pt in report.frontier:
        out.append(f'<circle class="frontier" cx="{_fmt(sx(pt.f2))}" cy="{_fmt(sy(pt.f1))}" '
                   f'r="4" fill="black" stroke="black"><title>{escape(pt.model_id)}</title></circle>')
    out.append("</g>")

    marked = [pt for pt in report.all_points if highlight and pt.model_id == highlight]
    for pt in marked[:1]:
        out.append(f'<circle class="highlight" cx="{_fmt(sx(pt.f2))}" cy="{_fmt(sy(pt.f1))}" '
                   f'r="9" fill="none" stroke="red" stroke-width="2">'
                   f"<title>{escape(pt.model_id)}</title></circle>")

    lx, ly = WIDTH - RIGHT + 15, TOP + 10
    out.append('<g class="legend">')
    out.append(f'<circle cx="{lx}" cy="{ly}" r="4" fill="black" stroke="black"/>')
    out.append(f'<text x="{lx + 10}" y="{ly + 4}">Pareto optimal</text>')
    out.append(f'<circle cx="{lx}" cy="{ly + 20}" r="4" fill="none" stroke="black"/>')
    out.append(f'<text x="{lx + 10}" y="{ly + 24}">dominated</text>')
    if marked:
        out.append(f'<circle cx="{lx}" cy="{ly + 40}" r="7" fill="none" stroke="red" stroke-width="2"/>')
        out.append(f'<text x="{lx + 10}" y="{ly + 44}">selected model</text>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
