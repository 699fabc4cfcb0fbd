"""Herbrand functions ``psi = phi^-1 o sigma`` and the tools built on them."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Dict, FrozenSet, Hashable, Iterable, List, Mapping, NamedTuple, Optional, Sequence, Tuple

from ._numtheory import is_prime
from .errors import DomainError, InconsistentDataError, ValidationError
from .galois import GaloisDecomposition, sigma_function
from .gl import EndoClassProfile, structure_function
from .plf import (
    IDENTITY,
    PLFunction,
    agree_from,
    as_rational,
    certify,
    compose,
    derivative_jumps,
    evaluate,
    invert,
    scale_conj,
    slope_left,
    slope_right,
)
from .ultrametric import UltrametricTable, validate_ultrametric

__all__ = [
    "BoundarySlopeReport",
    "HerbrandBundle",
    "InterpolationReport",
    "TransferReport",
    "TwistSample",
    "ball_transfer_check",
    "boundary_slopes_check",
    "decompose_m",
    "essentially_tame_check",
    "herbrand_function",
    "interpolate_psi",
    "psi_inverse_agreement",
    "tame_lift_herbrand",
    "transfer_radius",
]


def herbrand_function(phi: PLFunction, sigma: PLFunction) -> PLFunction:
    """``phi^-1 o sigma``."""
    if sigma(0) < phi(0):
        raise DomainError(f"sigma(0) = {sigma(0)} < phi(0) = {phi(0)}: psi(0) would be negative")
    return compose(invert(phi), sigma)


@dataclass(frozen=True)
class HerbrandBundle:
    """Structure, decomposition and Herbrand functions of one endo-class.

    ``D`` collects every slope change of ``psi`` and ``sigma``.  ``notes``
    flags points where ``sigma'`` jumps but ``psi'`` does not; no such example
    is known, so they are surfaced rather than rejected.
    """

    profile: EndoClassProfile
    decomposition: GaloisDecomposition
    phi: PLFunction
    sigma: PLFunction
    psi: PLFunction
    D: FrozenSet[Fraction]

    @classmethod
    def build(cls, profile: EndoClassProfile, decomposition: GaloisDecomposition) -> "HerbrandBundle":
        phi = structure_function(profile)
        sigma = sigma_function(decomposition)
        if sigma(0) != phi(0):
            raise InconsistentDataError(f"sigma(0) = {sigma(0)} but phi(0) = {phi(0)}")
        psi = herbrand_function(phi, sigma)
        start = agree_from(psi, IDENTITY)
        if start is None or start > profile.m:
            raise InconsistentDataError(f"psi is not the identity on [m, oo) for m = {profile.m}")
        D = frozenset(j.x for j in derivative_jumps(psi)) | frozenset(j.x for j in derivative_jumps(sigma))
        return cls(profile, decomposition, phi, sigma, psi, D)

    @property
    def notes(self) -> List[str]:
        psi_jumps = {j.x for j in derivative_jumps(self.psi)}
        return [
            f"psi' is continuous at {x} although sigma' jumps there"
            for x in sorted(j.x for j in derivative_jumps(self.sigma))
            if x not in psi_jumps
        ]


def _check_herbrand_shape(psi: PLFunction):
    if psi.domain_start != 0 or psi(0) != 0 or not certify(psi).strictly_increasing:
        raise DomainError("expected a strictly increasing function with psi(0) = 0")


def transfer_radius(psi: PLFunction, eps) -> Fraction:
    """Endo-class radius ``psi(eps)`` matching the Galois radius ``eps``."""
    eps = as_rational(eps)
    if eps <= 0:
        raise DomainError(f"eps must be positive, got {eps}")
    _check_herbrand_shape(psi)
    return evaluate(psi, eps)


class TransferViolation(NamedTuple):
    x: Hashable
    y: Hashable
    eps: Fraction
    form: str
    delta: Fraction
    a: Fraction
    radius: Fraction


@dataclass
class TransferReport:
    violations: List[TransferViolation] = field(default_factory=list)
    table_problems: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations and not self.table_problems

    def lines(self) -> List[str]:
        out = list(self.table_problems)
        for v in self.violations:
            rel = "<" if v.form == "strict" else "<="
            out.append(
                f"{v.form} transfer fails for ({v.x},{v.y}) at eps = {v.eps}: "
                f"Delta = {v.delta} {rel} eps is {v.delta < v.eps if rel == '<' else v.delta <= v.eps}, "
                f"A = {v.a} {rel} psi(eps) = {v.radius} is {v.a < v.radius if rel == '<' else v.a <= v.radius}"
            )
        return out


def _eps_grid(psi: PLFunction, critical: Iterable[Fraction]) -> List[Fraction]:
    pts = sorted({x for x in critical if x > 0} | {j.x for j in derivative_jumps(psi)} | {Fraction(1)})
    grid = set(pts)
    grid.update((a + b) / 2 for a, b in zip(pts, pts[1:]))
    grid.add(pts[0] / 2)
    grid.add(pts[-1] + 1)
    return sorted(grid)


def ball_transfer_check(
    delta_table: UltrametricTable,
    a_table: UltrametricTable,
    psi_per_label: Mapping[Hashable, PLFunction],
) -> TransferReport:
    """Check both radius-transfer equivalences on every ordered pair of labels.

    For each pair ``(x, y)`` and each ``eps`` of a grid made of the slope
    changes of ``psi_x``, the critical radii ``Delta(x, y)`` and
    ``psi_x^-1(A(x, y))``, and the midpoints between them, the report records
    any failure of ``A < psi_x(eps) <=> Delta < eps`` or of its non-strict
    analogue.
    """
    rep = TransferReport()
    if set(delta_table.labels) != set(a_table.labels):
        rep.table_problems.append("the two tables have different labels")
        return rep
    for name, t in (("Delta", delta_table), ("A", a_table)):
        rep.table_problems += [f"{name} table: {line}" for line in validate_ultrametric(t).lines()]
    missing = [lab for lab in delta_table.labels if lab not in psi_per_label]
    if missing:
        rep.table_problems.append(f"no Herbrand function for {missing}")
        return rep
    for x in delta_table.labels:
        psi = psi_per_label[x]
        _check_herbrand_shape(psi)
        psi_inv = invert(psi)
        for y in delta_table.labels:
            if x == y:
                continue
            delta, a = delta_table.d(x, y), a_table.d(x, y)
            for eps in _eps_grid(psi, (delta, evaluate(psi_inv, a))):
                radius = evaluate(psi, eps)
                if (a < radius) != (delta < eps):
                    rep.violations.append(TransferViolation(x, y, eps, "strict", delta, a, radius))
                if (a <= radius) != (delta <= eps):
                    rep.violations.append(TransferViolation(x, y, eps, "non-strict", delta, a, radius))
    return rep


def psi_inverse_agreement(psi1: PLFunction, psi2: PLFunction, a) -> bool:
    """Whether the inverses of two Herbrand functions coincide on ``[a, oo)``."""
    a = as_rational(a)
    start = agree_from(invert(psi1), invert(psi2))
    return start is not None and start <= a


def tame_lift_herbrand(psi: PLFunction, e: int) -> PLFunction:
    if e < 1:
        raise DomainError(f"ramification index must be positive, got {e}")
    return scale_conj(psi, e)


@dataclass(frozen=True)
class TwistSample:
    """Distance between a tame lift and its twist by a character of conductor ``k``.

    ``e`` is the ramification index of the tame extension; the sample pins
    ``psi(k/e) = value/e``.
    """

    e: int
    k: int
    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "value", as_rational(self.value))
        if self.e < 1 or self.k < 1:
            raise ValidationError("sample_range", f"need e >= 1 and k >= 1, got e={self.e}, k={self.k}")
        if self.value <= 0:
            raise ValidationError("sample_positive", f"sample value must be positive, got {self.value}")

    @property
    def x(self) -> Fraction:
        return Fraction(self.k, self.e)

    @property
    def y(self) -> Fraction:
        return self.value / self.e

    @classmethod
    def at(cls, psi: PLFunction, x, e: Optional[int] = None) -> "TwistSample":
        """Sample ``psi`` at ``x`` using the smallest admissible ramification index."""
        x = as_rational(x)
        e = x.denominator if e is None else e
        if (x * e).denominator != 1:
            raise DomainError(f"{x} is not of the form k/{e}")
        return cls(e, int(x * e), e * evaluate(psi, x))


class SampleMismatch(NamedTuple):
    sample: TwistSample
    observed: Fraction
    expected: Optional[Fraction]


@dataclass
class InterpolationReport:
    """Outcome of :func:`interpolate_psi`.

    ``psi`` is set only when every check passed.  ``undetermined`` lists
    abscissae in ``D`` whose value the samples do not pin down.
    """

    psi: Optional[PLFunction] = None
    undetermined: List[Fraction] = field(default_factory=list)
    mismatches: List[SampleMismatch] = field(default_factory=list)
    skipped: List[TwistSample] = field(default_factory=list)
    problems: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.psi is not None

    def lines(self) -> List[str]:
        out = list(self.problems)
        if self.undetermined:
            out.append("sampling too sparse: no value determined at " + ", ".join(map(str, self.undetermined)))
        for mm in self.mismatches:
            exp = "(inconsistent with the other samples)" if mm.expected is None else f"expected {mm.expected}"
            out.append(f"sample e={mm.sample.e}, k={mm.sample.k}: psi({mm.sample.x}) = {mm.observed}, {exp}")
        out += [f"skipped sample at excluded point {s.x}" for s in self.skipped]
        return out


class _ExactSolver:
    """Incremental exact Gauss-Jordan elimination over the rationals."""

    def __init__(self):
        self.rows: Dict[int, Tuple[Dict[int, Fraction], Fraction]] = {}

    def add(self, coeffs: Dict[int, Fraction], rhs: Fraction) -> bool:
        """Add an equation; False if it contradicts the ones already present."""
        coeffs = {k: v for k, v in coeffs.items() if v}
        for piv, (row, r) in self.rows.items():
            c = coeffs.get(piv)
            if c:
                for k, v in row.items():
                    coeffs[k] = coeffs.get(k, 0) - c * v
                rhs -= c * r
                coeffs = {k: v for k, v in coeffs.items() if v}
        if not coeffs:
            return rhs == 0
        piv = min(coeffs)
        scale = coeffs[piv]
        coeffs = {k: v / scale for k, v in coeffs.items()}
        rhs = rhs / scale
        for p, (row, r) in list(self.rows.items()):
            c = row.get(piv)
            if c:
                new = dict(row)
                for k, v in coeffs.items():
                    new[k] = new.get(k, 0) - c * v
                self.rows[p] = ({k: v for k, v in new.items() if v}, r - c * rhs)
        self.rows[piv] = (coeffs, rhs)
        return True

    def value(self, var: int) -> Optional[Fraction]:
        row = self.rows.get(var)
        if row is None or len(row[0]) != 1:
            return None
        return row[1]


def interpolate_psi(
    samples: Sequence[TwistSample],
    m,
    D: Iterable,
    reference: Optional[PLFunction] = None,
) -> InterpolationReport:
    """Recover or verify a Herbrand function from twist samples.

    Without ``reference`` the function is reconstructed: it is piecewise linear
    with slope changes only inside ``D`` (plus ``m``), vanishes at 0 and is the
    identity from ``m`` on, so its values on ``D`` solve an exact linear system.
    If some value is left free the report lists it and no function is
    returned.  Samples at points of ``D`` are rejected.

    With ``reference`` every sample off ``D`` is compared against it; samples
    on ``D`` are skipped.
    """
    m = as_rational(m)
    if m < 0:
        raise DomainError(f"m must be nonnegative, got {m}")
    excluded = frozenset(as_rational(d) for d in D)
    rep = InterpolationReport()

    if reference is not None:
        for s in samples:
            if s.x in excluded:
                rep.skipped.append(s)
            elif evaluate(reference, s.x) != s.y:
                rep.mismatches.append(SampleMismatch(s, s.y, evaluate(reference, s.x)))
        if not rep.mismatches:
            rep.psi = reference
        return rep

    by_x: Dict[Fraction, TwistSample] = {}
    for s in samples:
        if s.x in excluded:
            raise DomainError(f"sample at {s.x} lies in the excluded set")
        prev = by_x.get(s.x)
        if prev is not None and prev.y != s.y:
            raise InconsistentDataError(f"conflicting samples at {s.x}: {prev.y} and {s.y}")
        by_x.setdefault(s.x, s)

    nodes = [Fraction(0)] + sorted(d for d in excluded if 0 < d < m) + ([m] if m > 0 else [])
    known = {0: Fraction(0), len(nodes) - 1: m}
    solver = _ExactSolver()
    for x in sorted(by_x):
        s = by_x[x]
        if x >= m:
            if s.y != x:
                rep.mismatches.append(SampleMismatch(s, s.y, x))
            continue
        j = max(i for i, n in enumerate(nodes) if n < x)
        t = (x - nodes[j]) / (nodes[j + 1] - nodes[j])
        coeffs: Dict[int, Fraction] = {}
        rhs = s.y
        for idx, w in ((j, 1 - t), (j + 1, t)):
            if idx in known:
                rhs -= w * known[idx]
            else:
                coeffs[idx] = coeffs.get(idx, 0) + w
        if not solver.add(coeffs, rhs):
            rep.mismatches.append(SampleMismatch(s, s.y, None))

    values = dict(known)
    for idx in range(1, len(nodes) - 1):
        v = solver.value(idx)
        if v is None:
            rep.undetermined.append(nodes[idx])
        else:
            values[idx] = v
    if rep.undetermined or rep.mismatches:
        return rep
    psi = PLFunction(tuple((n, values[i]) for i, n in enumerate(nodes)), 1)
    if not certify(psi).strictly_increasing:
        rep.problems.append("the samples force a function that is not strictly increasing")
        return rep
    rep.psi = psi
    return rep


def decompose_m(m, p: int, r: int) -> Tuple[int, int]:
    """Write ``m = a * p^(t - r)`` with ``a`` a positive integer prime to ``p``."""
    m = as_rational(m)
    if m <= 0:
        raise DomainError(f"m must be positive, got {m}")
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    num, den, v = m.numerator, m.denominator, 0
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    if den != 1:
        raise DomainError(f"{m} has denominator prime factors other than {p}")
    return num, v + r


@dataclass(frozen=True)
class BoundarySlopeReport:
    first_slope: Fraction
    expected_first: Fraction
    last_slope: Fraction
    expected_last: Fraction
    t: Optional[int]

    @property
    def failures(self) -> List[str]:
        out = []
        if self.first_slope != self.expected_first:
            out.append(f"slope near 0 is {self.first_slope}, expected {self.expected_first}")
        if self.last_slope != self.expected_last:
            out.append(f"slope just below m is {self.last_slope}, expected {self.expected_last}")
        return out

    @property
    def ok(self) -> bool:
        return not self.failures


def boundary_slopes_check(psi: PLFunction, p: int, r: int, m) -> BoundarySlopeReport:
    """Compare the slopes of ``psi`` next to 0 and next to ``m`` with ``p^-r`` and ``p^(r-t)``.

    Raises when ``t >= r``: such a class should first be twisted down to
    smaller level.
    """
    m = as_rational(m)
    if r < 0:
        raise DomainError(f"r must be nonnegative, got {r}")
    if m <= 0:
        raise DomainError(f"m must be positive, got {m}")
    if r == 0:
        t, exp_first, exp_last = None, Fraction(1), Fraction(1)
    else:
        _, t = decompose_m(m, p, r)
        if t >= r:
            raise DomainError(
                f"m = {m} gives t = {t} >= r = {r}; twist by a character to lower the level first"
            )
        exp_first, exp_last = Fraction(1, p ** r), Fraction(p) ** (r - t)
    return BoundarySlopeReport(slope_right(psi, 0), exp_first, slope_left(psi, m), exp_last, t)


class EssentiallyTameResult(NamedTuple):
    essentially_tame: bool
    consistent: bool
    message: str


def essentially_tame_check(profile: EndoClassProfile, psi: PLFunction) -> EssentiallyTameResult:
    """Decide essential tameness from ``psi`` and cross-check against ``gcd(e, p)``."""
    is_id = psi == IDENTITY
    by_e = gcd(profile.e, profile.p) == 1
    if is_id == by_e:
        msg = "consistent"
    else:
        msg = (
            f"inconsistent: psi is {'' if is_id else 'not '}the identity but "
            f"gcd(e, p) = gcd({profile.e}, {profile.p}) {'=' if by_e else '!='} 1"
        )
    return EssentiallyTameResult(is_id, is_id == by_e, msg)
