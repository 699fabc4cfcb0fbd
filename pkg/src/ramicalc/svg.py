"""Deterministic SVG overlay of piecewise-linear functions.

Coordinates are computed exactly and rounded to 1/1000 pixel with integer
arithmetic, so identical input yields byte-identical output everywhere.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence, Tuple
from xml.sax.saxutils import escape

from .errors import DomainError
from .plf import PLFunction, evaluate, format_rational

WIDTH, HEIGHT, MARGIN = 640, 480, 48
PALETTE = ("#1f4e9c", "#c0392b", "#1e8449", "#7d3c98", "#b9770e", "#17202a")


def _px(q: Fraction) -> str:
    n = round(q * 1000)
    sign = "-" if n < 0 else ""
    n = abs(n)
    whole, frac = divmod(n, 1000)
    return f"{sign}{whole}" if frac == 0 else f"{sign}{whole}.{frac:03d}".rstrip("0")


def _extent(functions: Sequence[Tuple[str, PLFunction]]) -> Tuple[Fraction, Fraction]:
    last = max(f.xs[-1] for _, f in functions)
    x_max = Fraction(1) if last == 0 else last * Fraction(5, 4)
    y_max = max(max(evaluate(f, x_max), max(y for _, y in f.points)) for _, f in functions)
    return x_max, (y_max if y_max > 0 else Fraction(1))


def plot_svg(functions: Sequence[Tuple[str, PLFunction]]) -> str:
    """Render labelled functions on ``[0, X]`` with breakpoint markers."""
    if not functions:
        raise DomainError("nothing to plot")
    x_max, y_max = _extent(functions)
    pw, ph = WIDTH - 2 * MARGIN, HEIGHT - 2 * MARGIN
    sx, sy = Fraction(pw) / x_max, Fraction(ph) / y_max

    def X(x):
        return _px(MARGIN + x * sx)

    def Y(y):
        return _px(HEIGHT - MARGIN - y * sy)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f"<!-- px = {MARGIN} + x*{pw}/({format_rational(x_max)}); "
        f"py = {HEIGHT - MARGIN} - y*{ph}/({format_rational(y_max)}); rounded to 1/1000 -->",
        '<rect x="0" y="0" width="100%" height="100%" fill="white"/>',
        f'<g stroke="black" stroke-width="1">'
        f'<line x1="{MARGIN}" y1="{HEIGHT - MARGIN}" x2="{WIDTH - MARGIN}" y2="{HEIGHT - MARGIN}"/>'
        f'<line x1="{MARGIN}" y1="{HEIGHT - MARGIN}" x2="{MARGIN}" y2="{MARGIN}"/></g>',
        f'<g font-family="monospace" font-size="12">'
        f'<text x="{MARGIN}" y="{HEIGHT - MARGIN + 16}">0</text>'
        f'<text x="{WIDTH - MARGIN}" y="{HEIGHT - MARGIN + 16}" text-anchor="end">{format_rational(x_max)}</text>'
        f'<text x="{MARGIN - 6}" y="{MARGIN + 4}" text-anchor="end">{format_rational(y_max)}</text></g>',
    ]
    for i, (label, f) in enumerate(functions):
        color = PALETTE[i % len(PALETTE)]
        pts = [p for p in f.points if p[0] <= x_max]
        if pts[-1][0] < x_max:
            pts.append((x_max, evaluate(f, x_max)))
        coords = " ".join(f"{X(x)},{Y(y)}" for x, y in pts)
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="2" points="{coords}"/>')
        for x, y in f.points:
            if x <= x_max:
                out.append(f'<circle cx="{X(x)}" cy="{Y(y)}" r="3" fill="{color}"/>')
        out.append(
            f'<text x="{WIDTH - MARGIN - 4}" y="{MARGIN + 16 * (i + 1)}" text-anchor="end" '
            f'font-family="monospace" font-size="12" fill="{color}">{escape(label)}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
