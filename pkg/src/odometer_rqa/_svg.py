"""Minimal dependency-free SVG line plots."""

from __future__ import annotations

import math
from typing import Sequence
from xml.sax.saxutils import escape

W, H = 640, 420
ML, MR, MT, MB = 70, 20, 40, 55


def _ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    if hi <= lo:
        return [lo]
    return [lo + (hi - lo) * i / (n - 1) for i in range(n)]


def line_plot(
    xs: Sequence[float],
    ys: Sequence[float],
    *,
    title: str,
    xlabel: str,
    ylabel: str,
    logx: bool = False,
    band: Sequence[float] | None = None,
    markers: Sequence[tuple[float, float, str]] = (),
    ylim: tuple[float, float] | None = None,
    comment: str = "",
) -> str:
    """One polyline (optionally with a +/- band) plus labelled point markers."""
    tx = (lambda v: math.log10(v)) if logx else (lambda v: v)
    X = [tx(x) for x in xs]
    x0, x1 = min(X), max(X)
    if ylim is None:
        lo = min(y - (band[i] if band else 0) for i, y in enumerate(ys))
        hi = max(y + (band[i] if band else 0) for i, y in enumerate(ys))
        pad = 0.05 * (hi - lo or 1)
        ylim = (lo - pad, hi + pad)
    y0, y1 = ylim

    def px(v):
        return ML + (W - ML - MR) * ((v - x0) / (x1 - x0) if x1 > x0 else 0.5)

    def py(v):
        return H - MB - (H - MT - MB) * ((v - y0) / (y1 - y0) if y1 > y0 else 0.5)

    out = ['<?xml version="1.0" encoding="UTF-8"?>']
    if comment:
        out.append(f"<!-- {escape(comment).replace('--', '- -')} -->")
    out.append(f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" font-family="sans-serif" font-size="12">')
    out.append(f'<rect width="{W}" height="{H}" fill="white"/>')
    out.append(f'<text x="{W / 2}" y="22" text-anchor="middle" font-size="14">{escape(title)}</text>')
    out.append(f'<line x1="{ML}" y1="{H - MB}" x2="{W - MR}" y2="{H - MB}" stroke="black"/>')
    out.append(f'<line x1="{ML}" y1="{MT}" x2="{ML}" y2="{H - MB}" stroke="black"/>')
    for t in _ticks(x0, x1):
        label = f"{10 ** t:.3g}" if logx else f"{t:.3g}"
        out.append(f'<line x1="{px(t):.1f}" y1="{H - MB}" x2="{px(t):.1f}" y2="{H - MB + 5}" stroke="black"/>')
        out.append(f'<text x="{px(t):.1f}" y="{H - MB + 18}" text-anchor="middle">{label}</text>')
    for t in _ticks(y0, y1):
        out.append(f'<line x1="{ML - 5}" y1="{py(t):.1f}" x2="{ML}" y2="{py(t):.1f}" stroke="black"/>')
        out.append(f'<text x="{ML - 8}" y="{py(t) + 4:.1f}" text-anchor="end">{t:.3g}</text>')
    out.append(f'<text x="{(ML + W - MR) / 2}" y="{H - 12}" text-anchor="middle">{escape(xlabel)}</text>')
    out.append(
        f'<text x="16" y="{(MT + H - MB) / 2}" text-anchor="middle" '
        f'transform="rotate(-90 16 {(MT + H - MB) / 2})">{escape(ylabel)}</text>'
    )
    if band:
        upper = [f"{px(x):.2f},{py(y + b):.2f}" for x, y, b in zip(X, ys, band)]
        lower = [f"{px(x):.2f},{py(y - b):.2f}" for x, y, b in zip(X, ys, band)]
        out.append(f'<polygon points="{" ".join(upper + lower[::-1])}" fill="#9ecae1" fill-opacity="0.5" stroke="none"/>')
    pts = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(X, ys))
    out.append(f'<polyline points="{pts}" fill="none" stroke="#08519c" stroke-width="1.5"/>')
    for mx, my, label in markers:
        cx, cy = px(tx(mx)), py(my)
        out.append(f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="4" fill="#d62728"/>')
        out.append(f'<text x="{cx + 6:.2f}" y="{cy - 6:.2f}" fill="#d62728">{escape(label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
