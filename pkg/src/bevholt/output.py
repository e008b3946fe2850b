"""CSV, plot-data and SVG renderings of a trajectory."""

from __future__ import annotations

import math
import os
import tempfile
from fractions import Fraction
from pathlib import Path

from .core import Trajectory

__all__ = ["format_scalar", "render_csv", "render_plot_data", "render_svg", "write_atomic"]


def format_scalar(value) -> str:
    """``p/q`` for rationals, shortest round-trip decimal for floats."""
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, complex):
        if value.imag == 0:
            return repr(value.real)
        return repr(value).strip("()")
    return repr(value)


def _real(value) -> float:
    if isinstance(value, complex):
        return value.real
    return float(value)


def render_csv(traj: Trajectory) -> str:
    lines = ["n,z"]
    lines.extend(f"{n},{format_scalar(z)}" for n, z in enumerate(traj))
    return "\n".join(lines) + "\n"


def render_plot_data(traj: Trajectory) -> str:
    """Whitespace separated ``n z`` rows (real part for complex states)."""
    return "".join(f"{n} {_real(z)!r}\n" for n, z in enumerate(traj))


_PALETTE = (
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
)


def render_svg(traj: Trajectory, title: str = "", width: int = 800, height: int = 400) -> str:
    """Static plot of ``z[n]`` against ``n``: axes plus one polyline per strand."""
    margin = 50
    values = [_real(z) for z in traj]
    finite = [v for v in values if math.isfinite(v)]
    lo, hi = (min(finite), max(finite)) if finite else (0.0, 1.0)
    if hi == lo:
        lo, hi = lo - 1.0, hi + 1.0
    n_max = max(len(values) - 1, 1)

    def x(n: int) -> float:
        return margin + (width - 2 * margin) * n / n_max

    def y(v: float) -> float:
        return height - margin - (height - 2 * margin) * (v - lo) / (hi - lo)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<line x1="{margin}" y1="{height - margin}" x2="{width - margin}" y2="{height - margin}" stroke="black"/>',
        f'<line x1="{margin}" y1="{margin}" x2="{margin}" y2="{height - margin}" stroke="black"/>',
        f'<text x="{width / 2:.1f}" y="{height - 12}" text-anchor="middle" font-size="12">n</text>',
        f'<text x="{margin - 6}" y="{margin + 4}" text-anchor="end" font-size="10">{hi:.4g}</text>',
        f'<text x="{margin - 6}" y="{height - margin}" text-anchor="end" font-size="10">{lo:.4g}</text>',
        f'<text x="{width - margin}" y="{height - margin + 14}" text-anchor="end" font-size="10">{n_max}</text>',
    ]
    if lo < 0 < hi:
        parts.append(
            f'<line x1="{margin}" y1="{y(0.0):.2f}" x2="{width - margin}" y2="{y(0.0):.2f}" '
            'stroke="#bbbbbb" stroke-dasharray="4 3"/>'
        )
    if title:
        parts.append(f'<text x="{width / 2:.1f}" y="20" text-anchor="middle" font-size="14">{_escape(title)}</text>')
    for j in range(traj.k):
        points = [
            f"{x(n):.2f},{y(values[n]):.2f}"
            for n in range(j, len(values), traj.k)
            if math.isfinite(values[n])
        ]
        if points:
            colour = _PALETTE[j % len(_PALETTE)]
            parts.append(f'<polyline fill="none" stroke="{colour}" stroke-width="1" points="{" ".join(points)}"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def write_atomic(path: Path, text: str) -> None:
    """Write UTF-8 text with LF endings via a temp file and rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise
