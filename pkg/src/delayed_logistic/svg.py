"""Minimal static SVG line charts (polylines on linear axes)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from xml.sax.saxutils import escape

import numpy as np

WIDTH, HEIGHT = 800, 500
_MARGIN = dict(left=70, right=20, top=40, bottom=55)
_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


@dataclass
class Series:
    x: np.ndarray
    y: np.ndarray
    label: str = ""
    color: str | None = None
    dashed: bool = False


@dataclass
class Band:
    x: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    label: str = ""
    color: str = "#1f77b4"


def nice_ticks(lo, hi, target=6):
    """Round tick positions covering ``[lo, hi]``."""
    if hi <= lo:
        hi = lo + 1.0 if lo == 0 else lo + abs(lo) * 0.1
    raw = (hi - lo) / target
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw), default=10 * mag)
    start = math.floor(lo / step) * step
    ticks = []
    k = 0
    while start + k * step <= hi + 1e-9 * step:
        ticks.append(round(start + k * step, 12))
        k += 1
    return ticks


def _fmt(v):
    return f"{v:.2f}".rstrip("0").rstrip(".") if abs(v) >= 1e-12 else "0"


def _label(v):
    return format(v, "g")


def line_chart(series, bands=(), title="", xlabel="t", ylabel="", ylim=None):
    """Render series (and shaded bands) to an SVG 1.1 document string."""
    xs = [np.asarray(s.x, float) for s in series] + [np.asarray(b.x, float) for b in bands]
    ys = [np.asarray(s.y, float) for s in series]
    ys += [np.asarray(b.lower, float) for b in bands] + [np.asarray(b.upper, float) for b in bands]
    x_lo = min(float(np.nanmin(x)) for x in xs)
    x_hi = max(float(np.nanmax(x)) for x in xs)
    if ylim is None:
        y_lo = min(float(np.nanmin(y)) for y in ys)
        y_hi = max(float(np.nanmax(y)) for y in ys)
        pad = 0.05 * (y_hi - y_lo or 1.0)
        y_lo, y_hi = y_lo - pad, y_hi + pad
    else:
        y_lo, y_hi = ylim
    xt, yt = nice_ticks(x_lo, x_hi), nice_ticks(y_lo, y_hi)
    x_lo, x_hi = min(x_lo, xt[0]), max(x_hi, xt[-1])
    y_lo, y_hi = min(y_lo, yt[0]), max(y_hi, yt[-1])

    L, R, Tm, B = _MARGIN["left"], _MARGIN["right"], _MARGIN["top"], _MARGIN["bottom"]
    pw, ph = WIDTH - L - R, HEIGHT - Tm - B

    def px(x):
        return L + (np.asarray(x, float) - x_lo) / (x_hi - x_lo) * pw

    def py(y):
        return Tm + ph - (np.asarray(y, float) - y_lo) / (y_hi - y_lo) * ph

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" width="{WIDTH}" height="{HEIGHT}" '
        'font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
    ]
    if title:
        out.append(f'<text x="{WIDTH / 2}" y="24" text-anchor="middle" '
                   f'font-size="15">{escape(title)}</text>')
    for t in xt:
        x = _fmt(float(px(t)))
        out.append(f'<line x1="{x}" y1="{Tm}" x2="{x}" y2="{Tm + ph}" stroke="#e5e5e5"/>')
        out.append(f'<text x="{x}" y="{Tm + ph + 18}" text-anchor="middle">{_label(t)}</text>')
    for t in yt:
        y = _fmt(float(py(t)))
        out.append(f'<line x1="{L}" y1="{y}" x2="{L + pw}" y2="{y}" stroke="#e5e5e5"/>')
        out.append(f'<text x="{L - 8}" y="{y}" text-anchor="end" '
                   f'dominant-baseline="middle">{_label(t)}</text>')
    out.append(f'<rect x="{L}" y="{Tm}" width="{pw}" height="{ph}" fill="none" stroke="black"/>')
    if xlabel:
        out.append(f'<text x="{L + pw / 2}" y="{HEIGHT - 12}" '
                   f'text-anchor="middle">{escape(xlabel)}</text>')
    if ylabel:
        out.append(f'<text x="18" y="{Tm + ph / 2}" text-anchor="middle" '
                   f'transform="rotate(-90 18 {Tm + ph / 2})">{escape(ylabel)}</text>')

    legend = []
    for b in bands:
        x = np.asarray(b.x, float)
        ok = np.isfinite(b.lower) & np.isfinite(b.upper)
        upper = [f"{_fmt(a)},{_fmt(c)}" for a, c in zip(px(x[ok]), py(np.asarray(b.upper)[ok]))]
        lower = [f"{_fmt(a)},{_fmt(c)}" for a, c in zip(px(x[ok]), py(np.asarray(b.lower)[ok]))]
        pts = " ".join(upper + lower[::-1])
        out.append(f'<polygon points="{pts}" fill="{b.color}" fill-opacity="0.2" stroke="none"/>')
        if b.label:
            legend.append((b.label, b.color, False, True))
    for i, s in enumerate(series):
        color = s.color or _COLORS[i % len(_COLORS)]
        x, y = np.asarray(s.x, float), np.asarray(s.y, float)
        ok = np.isfinite(x) & np.isfinite(y)
        pts = " ".join(f"{_fmt(a)},{_fmt(c)}" for a, c in zip(px(x[ok]), py(y[ok])))
        dash = ' stroke-dasharray="6,4"' if s.dashed else ""
        out.append(f'<polyline points="{pts}" fill="none" stroke="{color}" '
                   f'stroke-width="1.5"{dash}/>')
        if s.label:
            legend.append((s.label, color, s.dashed, False))
    for k, (label, color, dashed, filled) in enumerate(legend):
        y = Tm + 16 + 18 * k
        x = L + pw - 170
        if filled:
            out.append(f'<rect x="{x}" y="{y - 6}" width="24" height="12" '
                       f'fill="{color}" fill-opacity="0.2"/>')
        else:
            dash = ' stroke-dasharray="6,4"' if dashed else ""
            out.append(f'<line x1="{x}" y1="{y}" x2="{x + 24}" y2="{y}" '
                       f'stroke="{color}" stroke-width="2"{dash}/>')
        out.append(f'<text x="{x + 30}" y="{y}" dominant-baseline="middle">'
                   f'{escape(label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
