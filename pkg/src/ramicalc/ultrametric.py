"""Finite ultrametric tables: storage, validation and ball partitions."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Hashable, List, NamedTuple, Sequence, Tuple

from .errors import ValidationError
from .plf import as_rational


@dataclass(frozen=True)
class UltrametricTable:
    """Labelled points with a symmetric matrix of nonnegative rational distances.

    ``separating`` says whether distinct labels must be at positive distance.
    Structural problems (shape, symmetry, diagonal, sign) raise at
    construction; the strong triangle inequality is checked separately by
    :func:`validate_ultrametric`.
    """

    labels: Tuple[Hashable, ...]
    dist: Tuple[Tuple[Fraction, ...], ...]
    separating: bool = True

    def __post_init__(self):
        labels = tuple(self.labels)
        if not labels:
            raise ValidationError("nonempty_labels", "table needs at least one label")
        if len(set(labels)) != len(labels):
            raise ValidationError("distinct_labels", "labels must be distinct")
        n = len(labels)
        rows = tuple(tuple(as_rational(v) for v in row) for row in self.dist)
        if len(rows) != n or any(len(r) != n for r in rows):
            raise ValidationError("square_matrix", f"distance matrix must be {n}x{n}")
        for i in range(n):
            if rows[i][i] != 0:
                raise ValidationError("zero_diagonal", f"d({labels[i]},{labels[i]}) = {rows[i][i]}")
            for j in range(i + 1, n):
                if rows[i][j] != rows[j][i]:
                    raise ValidationError("symmetric", f"d({labels[i]},{labels[j]}) != d({labels[j]},{labels[i]})")
                if rows[i][j] < 0:
                    raise ValidationError("nonnegative", f"d({labels[i]},{labels[j]}) < 0")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "dist", rows)

    @classmethod
    def from_function(cls, labels: Sequence[Hashable], d, separating: bool = True) -> "UltrametricTable":
        """Tabulate ``d(x, y)`` over all label pairs (diagonal forced to 0)."""
        labels = tuple(labels)
        rows = [[Fraction(0) if i == j else as_rational(d(x, y)) for j, y in enumerate(labels)]
                for i, x in enumerate(labels)]
        return cls(labels, tuple(map(tuple, rows)), separating)

    def index(self, label) -> int:
        return self.labels.index(label)

    def d(self, x, y) -> Fraction:
        return self.dist[self.index(x)][self.index(y)]

    def __len__(self):
        return len(self.labels)


class TriangleViolation(NamedTuple):
    """``d(x, z) > max(d(x, y), d(y, z))``."""

    x: Hashable
    y: Hashable
    z: Hashable
    d_xz: Fraction
    d_xy: Fraction
    d_yz: Fraction


@dataclass
class UltrametricReport:
    violations: List[TriangleViolation] = field(default_factory=list)
    unseparated: List[Tuple[Hashable, Hashable]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations and not self.unseparated

    def __bool__(self):
        return self.ok

    def lines(self) -> List[str]:
        out = [
            f"ultrametric inequality fails: d({v.x},{v.z}) = {v.d_xz} > max(d({v.x},{v.y}) = {v.d_xy}, "
            f"d({v.y},{v.z}) = {v.d_yz})"
            for v in self.violations
        ]
        out += [f"separation fails: d({a},{b}) = 0 for distinct labels" for a, b in self.unseparated]
        return out


def validate_ultrametric(t: UltrametricTable) -> UltrametricReport:
    """Report every broken strong-triangle inequality and, if required, separation.

    Each violating unordered long side ``{x, z}`` is reported once per middle
    point ``y``.  Never raises.
    """
    rep = UltrametricReport()
    d, lab, n = t.dist, t.labels, len(t.labels)
    for i, k in combinations(range(n), 2):
        for j in range(n):
            if j in (i, k):
                continue
            if d[i][k] > max(d[i][j], d[j][k]):
                rep.violations.append(TriangleViolation(lab[i], lab[j], lab[k], d[i][k], d[i][j], d[j][k]))
    if t.separating:
        rep.unseparated = [(lab[i], lab[k]) for i, k in combinations(range(n), 2) if d[i][k] == 0]
    return rep


def truncation_classes(t: UltrametricTable, eps) -> List[List[Hashable]]:
    """Partition the labels into open balls of radius ``eps``.

    Labels ``x, y`` share a class iff ``d(x, y) < eps``; the ultrametric
    inequality makes this an equivalence relation.  Classes come out in
    order of their first label.
    """
    eps = as_rational(eps)
    if eps <= 0:
        raise ValidationError("positive_radius", f"eps must be positive, got {eps}")
    rep = validate_ultrametric(UltrametricTable(t.labels, t.dist, separating=False))
    if not rep.ok:
        raise ValidationError("ultrametric", "; ".join(rep.lines()[:3]))
    classes: List[List[Hashable]] = []
    heads: List[int] = []
    for i, lab in enumerate(t.labels):
        for cls, h in zip(classes, heads):
            if t.dist[h][i] < eps:
                cls.append(lab)
                break
        else:
            classes.append([lab])
            heads.append(i)
    return classes
