"""Endo-class profiles, structure functions and conductor arithmetic.

An endo-class is modelled by its invariant profile: residue characteristic,
degree, ramification and residue degrees, normalized level ``m``, ``k0`` and
the tower data ``(jump, d, e_x, c)`` describing the successive approximations
``gamma_x``.  Level ``j`` governs the open interval just left of ``jumps[j]``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from math import gcd
from typing import Hashable, Mapping, NamedTuple, Optional, Tuple

from ._numtheory import is_p_power, is_prime
from .errors import DomainError, InconsistentDataError, ValidationError
from .plf import IDENTITY, PLFunction, as_rational, evaluate
from .ultrametric import UltrametricTable, truncation_classes, validate_ultrametric

__all__ = [
    "EndoClassProfile",
    "Level",
    "PairingInput",
    "minimal_c",
    "minimal_profile",
    "mixed_level_distance",
    "pairing_varsigma",
    "structure_function",
    "swan_exponent",
    "tame_lift_structure",
    "truncation_classes",
    "twist_level",
    "varsigma_table",
]


class Level(NamedTuple):
    d: int
    e_x: int
    c: int


@dataclass(frozen=True)
class EndoClassProfile:
    p: int
    deg: int
    e: int
    f: int
    m: Fraction
    k0: Optional[Fraction]
    jumps: Tuple[Fraction, ...]
    levels: Tuple[Level, ...]
    trivial: bool = False

    def __post_init__(self):
        object.__setattr__(self, "m", as_rational(self.m))
        if self.k0 is not None:
            object.__setattr__(self, "k0", as_rational(self.k0))
        object.__setattr__(self, "jumps", tuple(as_rational(y) for y in self.jumps))
        object.__setattr__(self, "levels", tuple(Level(int(d), int(ex), int(c)) for d, ex, c in self.levels))
        self._validate()

    @classmethod
    def trivial_class(cls, p: int) -> "EndoClassProfile":
        return cls(p=p, deg=1, e=1, f=1, m=Fraction(0), k0=None, jumps=(), levels=(), trivial=True)

    def _validate(self):
        def fail(name, msg):
            raise ValidationError(name, msg)

        if not is_prime(self.p):
            fail("prime_p", f"residue characteristic {self.p} is not prime")
        if self.trivial:
            if (self.deg, self.e, self.f, self.m) != (1, 1, 1, 0) or self.jumps or self.levels:
                fail("trivial_class", "the trivial class has deg = e = f = 1, m = 0 and no jumps")
            return
        if min(self.deg, self.e, self.f) < 1:
            fail("positive_degrees", "deg, e, f must be positive")
        if self.e * self.f != self.deg:
            fail("ef_equals_deg", f"e*f = {self.e * self.f} but deg = {self.deg}")
        if self.m <= 0:
            fail("positive_m", f"m must be positive, got {self.m}")
        if self.e % self.m.denominator:
            fail("m_denominator", f"denominator of m = {self.m} does not divide e = {self.e}")
        if self.deg == 1:
            if self.k0 is not None:
                fail("k0_degree_one", "k0 must be null (minus infinity) when deg = 1")
        elif self.k0 is None or self.k0 >= 0:
            fail("k0_negative", "k0 must be a negative rational when deg > 1")
        js, lv = self.jumps, self.levels
        if not js:
            fail("nonempty_jumps", "jump set is empty")
        if len(js) != len(lv):
            fail("levels_match_jumps", f"{len(js)} jumps but {len(lv)} levels")
        if any(a >= b for a, b in zip(js, js[1:])) or js[0] <= 0:
            fail("jumps_increasing", "jumps must be positive and strictly increasing")
        if js[-1] != self.m:
            fail("last_jump_is_m", f"largest jump {js[-1]} differs from m = {self.m}")
        if self.k0 is not None:
            if -self.k0 > self.m:
                fail("k0_bound", f"-k0 = {-self.k0} exceeds m = {self.m}")
            if js[0] not in (self.m, -self.k0):
                fail("least_jump", f"least jump {js[0]} is neither m nor -k0")
        for lev in lv:
            if lev.d < 1 or lev.e_x < 1 or lev.c < 0:
                fail("level_range", f"level {tuple(lev)} needs d, e_x >= 1 and c >= 0")
            if lev.d % lev.e_x:
                fail("ex_divides_d", f"e_x = {lev.e_x} does not divide d = {lev.d}")
        if lv[0].d != self.deg:
            fail("first_level_degree", f"first level has d = {lv[0].d}, expected deg = {self.deg}")
        if lv[0].e_x != self.e:
            fail("first_level_ramification", f"first level has e_x = {lv[0].e_x}, expected e = {self.e}")
        for a, b in zip(lv, lv[1:]):
            if not (b.d < a.d and a.d % b.d == 0):
                fail("degrees_decrease", f"d = {b.d} must be a proper divisor of the previous d = {a.d}")
        for y, a, b in zip(js, lv, lv[1:]):
            left = Fraction(a.c, a.d ** 2) + y / a.d
            right = Fraction(b.c, b.d ** 2) + y / b.d
            if left != right:
                fail("continuity", f"structure function jumps at {y}: {left} != {right}")
        last = lv[-1]
        if Fraction(last.c, last.d ** 2) + self.m / last.d != self.m:
            fail("continuity_at_m", f"structure function is not continuous at m = {self.m}")

    @property
    def totally_wild(self) -> bool:
        return self.e == self.deg and is_p_power(self.deg, self.p)


def structure_function(prof: EndoClassProfile) -> PLFunction:
    """Piecewise ``c/d^2 + x/d`` below ``m``, identity beyond."""
    if prof.trivial:
        return IDENTITY
    first = prof.levels[0]
    pts = [(Fraction(0), Fraction(first.c, first.d ** 2))]
    for y, lev in zip(prof.jumps, prof.levels):
        pts.append((y, Fraction(lev.c, lev.d ** 2) + y / lev.d))
    return PLFunction(tuple(pts), 1)


def minimal_c(m: int, e: int, f: int) -> int:
    """Conductor-type integer ``m f (e f - 1)`` of a minimal element."""
    if gcd(m, e) != 1:
        raise DomainError(f"not minimal: gcd({m}, {e}) != 1")
    return m * f * (e * f - 1)


def minimal_profile(a: int, b: int, p: int) -> EndoClassProfile:
    """Totally ramified minimal profile of degree ``b`` and level ``a/b``."""
    if a < 1 or b < 1:
        raise DomainError("a and b must be positive")
    if gcd(a, b) != 1:
        raise DomainError(f"gcd({a}, {b}) != 1")
    m = Fraction(a, b)
    return EndoClassProfile(
        p=p,
        deg=b,
        e=b,
        f=1,
        m=m,
        k0=None if b == 1 else -m,
        jumps=(m,),
        levels=(Level(b, b, minimal_c(a, b, 1)),),
    )


def tame_lift_structure(prof: EndoClassProfile, e_ext: int) -> EndoClassProfile:
    """Lift a totally wild profile along a tame extension with ramification ``e_ext``."""
    if e_ext < 1:
        raise DomainError(f"ramification index must be positive, got {e_ext}")
    if prof.trivial:
        return prof
    if not prof.totally_wild:
        raise DomainError(f"profile is not totally wild (e = {prof.e}, deg = {prof.deg}, p = {prof.p})")
    return replace(
        prof,
        m=prof.m * e_ext,
        k0=None if prof.k0 is None else prof.k0 * e_ext,
        jumps=tuple(y * e_ext for y in prof.jumps),
        levels=tuple(Level(l.d, l.e_x, l.c * e_ext) for l in prof.levels),
    )


def pairing_varsigma(prof1: EndoClassProfile, prof2: EndoClassProfile, a) -> Fraction:
    """Normalized Swan exponent of a pair whose endo-classes are at distance ``a``."""
    a = as_rational(a)
    if a < 0:
        raise DomainError(f"distance must be nonnegative, got {a}")
    v1 = evaluate(structure_function(prof1), a)
    v2 = evaluate(structure_function(prof2), a)
    if v1 != v2:
        raise InconsistentDataError(f"structure functions disagree at distance {a}: {v1} != {v2}")
    return v1


def mixed_level_distance(m1, m2) -> Optional[Fraction]:
    """Distance forced by unequal levels; ``None`` when the levels coincide."""
    m1, m2 = as_rational(m1), as_rational(m2)
    if m1 < 0 or m2 < 0:
        raise DomainError("levels must be nonnegative")
    return None if m1 == m2 else max(m1, m2)


@dataclass(frozen=True)
class PairingInput:
    ar: int
    n1: int
    n2: int
    d: int = 0

    def __post_init__(self):
        if self.n1 < 1 or self.n2 < 1 or self.d < 0:
            raise ValidationError("pairing_range", "n1, n2 must be positive and d nonnegative")
        if self.n1 != self.n2 and self.d != 0:
            raise ValidationError("d_vanishes", "d must be 0 when n1 != n2")


def swan_exponent(pi: PairingInput) -> int:
    return pi.ar - pi.n1 * pi.n2 + pi.d


def varsigma_table(profiles: Mapping[Hashable, EndoClassProfile], t: UltrametricTable) -> UltrametricTable:
    """Apply the conductor formula to every pair of an endo-class distance table."""
    rep = validate_ultrametric(t)
    if not rep.ok:
        raise ValidationError("ultrametric", "; ".join(rep.lines()[:3]))
    missing = [lab for lab in t.labels if lab not in profiles]
    if missing:
        raise ValidationError("profiles_cover_labels", f"no profile for {missing}")
    out = UltrametricTable.from_function(
        t.labels, lambda x, y: pairing_varsigma(profiles[x], profiles[y], t.d(x, y)), separating=False
    )
    rep = validate_ultrametric(out)
    if not rep.ok:
        raise InconsistentDataError("pairing table is not ultrametric: " + "; ".join(rep.lines()[:3]))
    return out


def twist_level(m, k: int) -> Fraction:
    """Normalized level after twisting by a character of Swan conductor ``k``."""
    if k < 1:
        raise DomainError(f"k must be a positive integer, got {k}")
    return max(as_rational(m), Fraction(k))
