"""Bare-bones SVG line and scatter plots (no plotting dependency)."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f")


@dataclass
class Series:
    x: np.ndarray
    y: np.ndarray
    label: str = ""
    kind: str = "line"  # line | scatter | hollow
    color: str | None = None


def _fmt(v: float) -> str:
    return f"{v:.4g}"


def plot(path, series: list[Series], title: str = "", xlabel: str = "", ylabel: str = "",
         width: int = 640, height: int = 400, max_points: int = 4000) -> None:
    ml, mr, mt, mb = 60, 20, 30, 45
    xs = np.concatenate([np.asarray(s.x, float) for s in series]) if series else np.zeros(1)
    ys = np.concatenate([np.asarray(s.y, float) for s in series]) if series else np.zeros(1)
    ok = np.isfinite(xs) & np.isfinite(ys)
    x0, x1 = (xs[ok].min(), xs[ok].max()) if ok.any() else (0.0, 1.0)
    y0, y1 = (ys[ok].min(), ys[ok].max()) if ok.any() else (0.0, 1.0)
    if x1 == x0:
        x0, x1 = x0 - 1, x1 + 1
    if y1 == y0:
        y0, y1 = y0 - 1, y1 + 1
    pw, ph = width - ml - mr, height - mt - mb

    def sx(v):
        return ml + (v - x0) / (x1 - x0) * pw

    def sy(v):
        return mt + ph - (v - y0) / (y1 - y0) * ph

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
           f'font-family="sans-serif" font-size="11">',
           f'<rect x="{ml}" y="{mt}" width="{pw}" height="{ph}" fill="none" stroke="#444"/>',
           f'<text x="{width / 2}" y="18" text-anchor="middle" font-size="13">{escape(title)}</text>',
           f'<text x="{ml + pw / 2}" y="{height - 8}" text-anchor="middle">{escape(xlabel)}</text>',
           f'<text x="14" y="{mt + ph / 2}" text-anchor="middle" '
           f'transform="rotate(-90 14 {mt + ph / 2})">{escape(ylabel)}</text>']
    for frac in (0.0, 0.5, 1.0):
        xv, yv = x0 + frac * (x1 - x0), y0 + frac * (y1 - y0)
        out.append(f'<text x="{sx(xv):.1f}" y="{mt + ph + 14}" text-anchor="middle">{_fmt(xv)}</text>')
        out.append(f'<text x="{ml - 4}" y="{sy(yv) + 4:.1f}" text-anchor="end">{_fmt(yv)}</text>')
    for i, s in enumerate(series):
        color = s.color or PALETTE[i % len(PALETTE)]
        x, y = np.asarray(s.x, float), np.asarray(s.y, float)
        if x.size > max_points:
            idx = np.linspace(0, x.size - 1, max_points).astype(int)
            x, y = x[idx], y[idx]
        if s.kind == "line":
            pts = " ".join(f"{sx(a):.1f},{sy(b):.1f}" for a, b in zip(x, y) if np.isfinite(a) and np.isfinite(b))
            out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.2" points="{pts}"/>')
        else:
            fill = "none" if s.kind == "hollow" else color
            r = 3.5 if s.kind == "hollow" else 1.2
            out += [f'<circle cx="{sx(a):.1f}" cy="{sy(b):.1f}" r="{r}" fill="{fill}" stroke="{color}"/>'
                    for a, b in zip(x, y) if np.isfinite(a) and np.isfinite(b)]
        if s.label:
            ly = mt + 14 + 14 * i
            out.append(f'<text x="{ml + pw - 6}" y="{ly}" text-anchor="end" fill="{color}">{escape(s.label)}</text>')
    out.append("</svg>")
    Path(path).write_text("\n".join(out) + "\n")
