"""Minimal native SVG line plots and atomic file output."""

from __future__ import annotations

import math
import os
import tempfile
from dataclasses import dataclass, field
from xml.sax.saxutils import escape

import numpy as np

DASHES = {
    "solid": None,
    "dashed": "7,4",
    "dashdot": "9,3,2,3",
    "dotted": "2,3",
}
COLORS = ["#1f4e99", "#b23a22", "#2b7a3d", "#7a4a9e", "#b8860b", "#333333"]


@dataclass
class Curve:
    x: np.ndarray
    y: np.ndarray
    label: str = ""
    style: str = "solid"
    color: str | None = None


@dataclass
class Panel:
    title: str
    curves: list[Curve] = field(default_factory=list)
    xlabel: str = "x"
    ylabel: str = "u"


def write_atomic(path: str, text: str) -> None:
    """Write ``text`` to ``path`` through a temporary file and a rename."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        # mkstemp creates 0600; give the usual umask-filtered mode instead
        mask = os.umask(0)
        os.umask(mask)
        os.chmod(tmp, 0o666 & ~mask)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _nice_ticks(lo: float, hi: float, n: int = 5) -> np.ndarray:
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / n
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 5, 10) if m * mag >= raw), default=mag * 10)
    start = math.ceil(lo / step) * step
    return np.arange(start, hi + 0.5 * step, step)


def _fmt(v: float) -> str:
    return f"{v:.6g}"


def render_svg(panels: list[Panel], width: int = 420, height: int = 300) -> str:
    """Render panels side by side as an SVG document."""
    margin_l, margin_r, margin_t, margin_b = 58, 14, 28, 42
    total_w = width * len(panels)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{total_w}" height="{height}" '
        f'viewBox="0 0 {total_w} {height}" font-family="sans-serif" font-size="11">',
        f'<rect width="{total_w}" height="{height}" fill="white"/>',
    ]
    for k, panel in enumerate(panels):
        ox = k * width
        pw = width - margin_l - margin_r
        ph = height - margin_t - margin_b
        xs = [c.x[np.isfinite(c.y)] for c in panel.curves]
        ys = [c.y[np.isfinite(c.y)] for c in panel.curves]
        xs = [v for v in xs if v.size]
        ys = [v for v in ys if v.size]
        x_lo = min((float(v.min()) for v in xs), default=0.0)
        x_hi = max((float(v.max()) for v in xs), default=1.0)
        y_lo = min(0.0, min((float(v.min()) for v in ys), default=0.0))
        y_hi = max((float(v.max()) for v in ys), default=1.0)
        if y_hi <= y_lo:
            y_hi = y_lo + 1.0
        y_hi += 0.05 * (y_hi - y_lo)
        if x_hi <= x_lo:
            x_hi = x_lo + 1.0

        def sx(v):
            return ox + margin_l + (v - x_lo) / (x_hi - x_lo) * pw

        def sy(v):
            return margin_t + (1.0 - (v - y_lo) / (y_hi - y_lo)) * ph

        parts.append(
            f'<rect x="{ox + margin_l}" y="{margin_t}" width="{pw}" height="{ph}" '
            'fill="none" stroke="black" stroke-width="1"/>'
        )
        for tx in _nice_ticks(x_lo, x_hi):
            if x_lo - 1e-12 <= tx <= x_hi + 1e-12:
                X = sx(tx)
                parts.append(f'<line x1="{X:.2f}" y1="{margin_t + ph}" x2="{X:.2f}" y2="{margin_t + ph + 4}" stroke="black"/>')
                parts.append(f'<text x="{X:.2f}" y="{margin_t + ph + 16}" text-anchor="middle">{_fmt(tx)}</text>')
        for ty in _nice_ticks(y_lo, y_hi):
            if y_lo - 1e-12 <= ty <= y_hi + 1e-12:
                Y = sy(ty)
                parts.append(f'<line x1="{ox + margin_l - 4}" y1="{Y:.2f}" x2="{ox + margin_l}" y2="{Y:.2f}" stroke="black"/>')
                parts.append(f'<text x="{ox + margin_l - 6}" y="{Y + 4:.2f}" text-anchor="end">{_fmt(ty)}</text>')
        parts.append(
            f'<text x="{ox + margin_l + pw / 2:.2f}" y="{height - 8}" text-anchor="middle">{escape(panel.xlabel)}</text>'
        )
        parts.append(
            f'<text x="{ox + 14}" y="{margin_t + ph / 2:.2f}" text-anchor="middle" '
            f'transform="rotate(-90 {ox + 14} {margin_t + ph / 2:.2f})">{escape(panel.ylabel)}</text>'
        )
        parts.append(
            f'<text x="{ox + margin_l + pw / 2:.2f}" y="{margin_t - 10}" text-anchor="middle">{escape(panel.title)}</text>'
        )
        for j, c in enumerate(panel.curves):
            color = c.color or COLORS[j % len(COLORS)]
            ok = np.isfinite(c.y)
            pts = " ".join(f"{sx(a):.2f},{sy(b):.2f}" for a, b in zip(c.x[ok], c.y[ok]))
            dash = DASHES.get(c.style)
            dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
            parts.append(
                f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.4"{dash_attr}/>'
            )
            if c.label:
                ly = margin_t + 14 + 14 * j
                lx = ox + margin_l + pw - 110
                parts.append(
                    f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 22}" y2="{ly - 4}" stroke="{color}" stroke-width="1.4"{dash_attr}/>'
                )
                parts.append(f'<text x="{lx + 26}" y="{ly}">{escape(c.label)}</text>')
    parts.append("</svg>\n")
    return "\n".join(parts)
