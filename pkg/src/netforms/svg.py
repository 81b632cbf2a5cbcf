"""Minimal hand-emitted SVG polyline plots.

No plotting dependency: output is a deterministic function of the data, so
identical inputs produce byte-identical files.
"""

from __future__ import annotations

__all__ = ["polyline_plot"]

_W, _H = 640, 400
_ML, _MR, _MT, _MB = 70, 20, 40, 50


def _fmt(x: float) -> str:
    return format(x, ".17g")


def polyline_plot(xs, ys, title: str, xlabel: str, ylabel: str) -> str:
    xs = [float(x) for x in xs]
    ys = [float(y) for y in ys]
    if len(xs) != len(ys) or not xs:
        raise ValueError("xs and ys must be nonempty and of equal length")
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    xspan = (x1 - x0) or 1.0
    yspan = (y1 - y0) or 1.0
    pw = _W - _ML - _MR
    ph = _H - _MT - _MB

    def px(x):
        return _ML + pw * (x - x0) / xspan

    def py(y):
        return _MT + ph * (1.0 - (y - y0) / yspan)

    pts = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(xs, ys))
    lines = [
        '<svg xmlns="http://www.w3.org/2000/svg" width="640" height="400" viewBox="0 0 640 400">',
        '<rect width="640" height="400" fill="white"/>',
        f'<text x="{_W / 2:.2f}" y="24" text-anchor="middle" font-family="monospace" font-size="14">{title}</text>',
        f'<line x1="{_ML}" y1="{_MT + ph}" x2="{_ML + pw}" y2="{_MT + ph}" stroke="black"/>',
        f'<line x1="{_ML}" y1="{_MT}" x2="{_ML}" y2="{_MT + ph}" stroke="black"/>',
        f'<polyline points="{pts}" fill="none" stroke="black" stroke-width="1.5"/>',
        f'<text x="{_W / 2:.2f}" y="{_H - 12}" text-anchor="middle" font-family="monospace" font-size="12">{xlabel}</text>',
        f'<text x="16" y="{_MT - 10}" font-family="monospace" font-size="12">{ylabel}</text>',
        f'<text x="{_ML}" y="{_MT + ph + 16}" text-anchor="middle" font-family="monospace" font-size="10">{_fmt(x0)}</text>',
        f'<text x="{_ML + pw}" y="{_MT + ph + 16}" text-anchor="middle" font-family="monospace" font-size="10">{_fmt(x1)}</text>',
        f'<text x="{_ML - 4}" y="{_MT + ph + 4}" text-anchor="end" font-family="monospace" font-size="10">{_fmt(y0)}</text>',
        f'<text x="{_ML - 4}" y="{_MT + 4}" text-anchor="end" font-family="monospace" font-size="10">{_fmt(y1)}</text>',
        "</svg>",
    ]
    return "\n".join(lines) + "\n"
