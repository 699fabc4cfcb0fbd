"""Exact continuous piecewise-linear functions on a half-line.

A :class:`PLFunction` is stored as its breakpoints ``(x, y)`` together with the
slope of the final ray.  The domain is ``[x_0, oo)`` where ``x_0`` is the first
breakpoint abscissa; almost every function in this package has ``x_0 = 0``,
the exception being inverses such as ``invert(phi)`` whose domain starts at
``phi(0)``.

Construction always canonicalizes: interior breakpoints collinear with their
neighbours are dropped, and so is a final breakpoint whose left slope equals the
terminal slope.  Two functions are therefore equal as functions exactly when
their dataclass fields compare equal.

All arithmetic is done with :class:`fractions.Fraction`.  Floats are refused at
every entry point.
"""

from __future__ import annotations

import csv
import io
import numbers
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, NamedTuple, Optional, Sequence, Tuple

from .errors import DomainError, NotInvertibleError, ValidationError

Rational = Fraction
Point = Tuple[Fraction, Fraction]


def as_rational(value) -> Fraction:
    """Convert ``value`` to a Fraction without ever going through a float.

    Accepts ints, Fractions, other exact ``numbers.Rational`` values and
    strings such as ``"3/8"`` or ``"-2"``.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rational numbers")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text or any(c in text for c in ".eE"):
            raise ValueError(f"not an exact rational literal: {value!r}")
        return Fraction(text)
    if isinstance(value, numbers.Rational):
        return Fraction(int(value.numerator), int(value.denominator))
    if isinstance(value, float):
        raise TypeError(
            "floating-point input is not accepted; convert explicitly, "
            "e.g. Fraction(x) or Fraction(x).limit_denominator(n)"
        )
    raise TypeError(f"cannot interpret {type(value).__name__} as a rational")


def format_rational(q) -> str:
    """Render as ``a/b``, or ``a`` when the denominator is 1."""
    q = as_rational(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _slope(p: Point, q: Point) -> Fraction:
    return (q[1] - p[1]) / (q[0] - p[0])


def _canonical_points(points: Sequence[Point], terminal_slope: Fraction) -> Tuple[Point, ...]:
    out = [points[0]]
    for pt in points[1:]:
        if len(out) >= 2 and _slope(out[-2], out[-1]) == _slope(out[-1], pt):
            out.pop()
        out.append(pt)
    if len(out) >= 2 and _slope(out[-2], out[-1]) == terminal_slope:
        out.pop()
    return tuple(out)


@dataclass(frozen=True)
class PLFunction:
    """Continuous piecewise-linear function on ``[points[0].x, oo)``.

    Parameters
    ----------
    points : sequence of (x, y)
        Breakpoints with strictly increasing ``x``; the first one fixes the
        left end of the domain and must satisfy ``x >= 0``.
    terminal_slope : rational
        Slope on ``[points[-1].x, oo)``.
    """

    points: Tuple[Point, ...]
    terminal_slope: Fraction

    def __post_init__(self):
        pts = tuple((as_rational(x), as_rational(y)) for x, y in self.points)
        if not pts:
            raise ValidationError("nonempty_breakpoints", "a PLFunction needs at least one breakpoint")
        if pts[0][0] < 0:
            raise DomainError(f"domain must lie in [0, oo), got start {pts[0][0]}")
        for (x0, _), (x1, _) in zip(pts, pts[1:]):
            if x1 <= x0:
                raise ValidationError(
                    "increasing_x", f"breakpoint abscissae must strictly increase ({x0} then {x1})"
                )
        ts = as_rational(self.terminal_slope)
        object.__setattr__(self, "points", _canonical_points(pts, ts))
        object.__setattr__(self, "terminal_slope", ts)

    # -- constructors -----------------------------------------------------

    @classmethod
    def identity(cls) -> "PLFunction":
        return cls(((Fraction(0), Fraction(0)),), Fraction(1))

    @classmethod
    def affine(cls, intercept, slope, start=0) -> "PLFunction":
        start = as_rational(start)
        return cls(((start, as_rational(intercept) + as_rational(slope) * start),), slope)

    @classmethod
    def from_slopes(cls, y0, pieces: Iterable[Tuple[object, object]], terminal_slope, x0=0) -> "PLFunction":
        """Build from a start value and ``(slope, right_end)`` pieces.

        >>> PLFunction.from_slopes("5/16", [("1/4", "1/4"), ("1/2", "1/2")], 1)(Fraction(1, 2))
        Fraction(1, 2)
        """
        x, y = as_rational(x0), as_rational(y0)
        pts = [(x, y)]
        for slope, right in pieces:
            right = as_rational(right)
            y = y + as_rational(slope) * (right - x)
            x = right
            pts.append((x, y))
        return cls(tuple(pts), terminal_slope)

    # -- views ------------------------------------------------------------

    @property
    def domain_start(self) -> Fraction:
        return self.points[0][0]

    @cached_property
    def xs(self) -> Tuple[Fraction, ...]:
        return tuple(x for x, _ in self.points)

    @cached_property
    def slopes(self) -> Tuple[Fraction, ...]:
        """Segment slopes from left to right, terminal slope last."""
        inner = tuple(_slope(p, q) for p, q in zip(self.points, self.points[1:]))
        return inner + (self.terminal_slope,)

    def __call__(self, x) -> Fraction:
        return evaluate(self, x)

    def __repr__(self):
        pts = ", ".join(f"({format_rational(x)}, {format_rational(y)})" for x, y in self.points)
        return f"PLFunction([{pts}], terminal_slope={format_rational(self.terminal_slope)})"


IDENTITY = PLFunction.identity()


class Jump(NamedTuple):
    x: Fraction
    left_slope: Fraction
    right_slope: Fraction


class Certificate(NamedTuple):
    convex: bool
    strictly_increasing: bool


def _segment_index(f: PLFunction, x: Fraction) -> int:
    return bisect_right(f.xs, x) - 1


def evaluate(f: PLFunction, x) -> Fraction:
    """Value of ``f`` at ``x``, extrapolating along the terminal ray."""
    x = as_rational(x)
    if x < f.domain_start:
        raise DomainError(f"{x} lies left of the domain start {f.domain_start}")
    i = _segment_index(f, x)
    px, py = f.points[i]
    return py + f.slopes[i] * (x - px)


def slope_right(f: PLFunction, x) -> Fraction:
    """Slope of ``f`` on ``(x, x + h)`` for small ``h > 0``."""
    x = as_rational(x)
    if x < f.domain_start:
        raise DomainError(f"{x} lies left of the domain start {f.domain_start}")
    return f.slopes[_segment_index(f, x)]


def slope_left(f: PLFunction, x) -> Fraction:
    """Slope of ``f`` on ``(x - h, x)`` for small ``h > 0``."""
    x = as_rational(x)
    if x <= f.domain_start:
        raise DomainError(f"no left slope at or before the domain start {f.domain_start}")
    return f.slopes[bisect_left(f.xs, x) - 1]


def invert(f: PLFunction) -> PLFunction:
    """Inverse function, defined on ``[f(x_0), oo)``."""
    if any(s <= 0 for s in f.slopes):
        raise NotInvertibleError("function has a non-increasing segment")
    return PLFunction(tuple((y, x) for x, y in f.points), 1 / f.terminal_slope)


def compose(f: PLFunction, g: PLFunction) -> PLFunction:
    """``f o g``, exact.  The range of ``g`` must lie inside the domain of ``f``."""
    if g.terminal_slope < 0 or min(y for _, y in g.points) < f.domain_start:
        raise DomainError("range of the inner function leaves the domain of the outer one")
    cuts = set(g.xs)
    gpts = g.points
    for b in f.xs[1:]:
        for (x0, y0), (x1, y1), s in zip(gpts, gpts[1:], g.slopes):
            if min(y0, y1) < b < max(y0, y1):
                cuts.add(x0 + (b - y0) / s)
        xl, yl = gpts[-1]
        if g.terminal_slope > 0 and b > yl:
            cuts.add(xl + (b - yl) / g.terminal_slope)
    xs = sorted(cuts)
    pts = tuple((x, evaluate(f, evaluate(g, x))) for x in xs)
    last = xs[-1]
    ts = evaluate(f, evaluate(g, last + 1)) - pts[-1][1]
    return PLFunction(pts, ts)


def scale_conj(f: PLFunction, e) -> PLFunction:
    """``x -> e * f(x / e)``: scale both axes by ``e``."""
    e = as_rational(e)
    if e <= 0:
        raise DomainError(f"scale factor must be positive, got {e}")
    return PLFunction(tuple((e * x, e * y) for x, y in f.points), f.terminal_slope)


def max_affine_mean(n: int, terms: Sequence[Tuple[object, object]]) -> PLFunction:
    """``x -> n^-1 * sum_i max(a_i x, b_i)`` for nonnegative ``a_i, b_i``."""
    if not terms:
        raise DomainError("empty term list")
    if n < 1:
        raise DomainError(f"normalizer must be a positive integer, got {n}")
    pairs = [(as_rational(a), as_rational(b)) for a, b in terms]
    if any(a < 0 or b < 0 for a, b in pairs):
        raise DomainError("coefficients must be nonnegative")
    if not any(a > 0 and b == 0 for a, b in pairs):
        raise DomainError("need a term (a, 0) with a > 0 for strict increase")
    xs = sorted({Fraction(0)} | {b / a for a, b in pairs if a > 0 and b > 0})
    pts = tuple((x, sum(max(a * x, b) for a, b in pairs) / n) for x in xs)
    return PLFunction(pts, sum(a for a, _ in pairs) / Fraction(n))


def derivative_jumps(f: PLFunction) -> list:
    """Breakpoints where the slope changes, as :class:`Jump` tuples."""
    s = f.slopes
    return [Jump(x, s[i], s[i + 1]) for i, (x, _) in enumerate(f.points[1:])]


def certify(f: PLFunction) -> Certificate:
    s = f.slopes
    return Certificate(
        convex=all(a <= b for a, b in zip(s, s[1:])),
        strictly_increasing=all(v > 0 for v in s),
    )


def agree_from(f: PLFunction, g: PLFunction) -> Optional[Fraction]:
    """Least ``x0`` such that ``f == g`` on ``[x0, oo)``, or ``None``.

    The search is restricted to the common domain.
    """
    if f.terminal_slope != g.terminal_slope:
        return None
    lo = max(f.domain_start, g.domain_start)
    xs = sorted({lo} | {x for x in f.xs + g.xs if x > lo})
    if evaluate(f, xs[-1]) != evaluate(g, xs[-1]):
        return None
    for i in range(len(xs) - 2, -1, -1):
        if evaluate(f, xs[i]) != evaluate(g, xs[i]):
            return xs[i + 1]
    return lo


def to_csv(f: PLFunction) -> str:
    """Breakpoint dump with header ``x,y,right_slope``."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "y", "right_slope"])
    for (x, y), s in zip(f.points, f.slopes):
        w.writerow([format_rational(x), format_rational(y), format_rational(s)])
    return buf.getvalue()


def from_csv(text: str) -> PLFunction:
    rows = list(csv.DictReader(io.StringIO(text)))
    if not rows:
        raise ValidationError("nonempty_breakpoints", "CSV holds no breakpoint rows")
    pts = tuple((as_rational(r["x"]), as_rational(r["y"])) for r in rows)
    f = PLFunction(pts, as_rational(rows[-1]["right_slope"]))
    for r in rows:
        if slope_right(f, r["x"]) != as_rational(r["right_slope"]):
            raise ValidationError("csv_slopes", f"right_slope at x={r['x']} disagrees with the breakpoints")
    return f
