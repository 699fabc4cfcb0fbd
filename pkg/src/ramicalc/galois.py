"""Decomposition functions and Galois-side diagnostics.

A representation enters only through the decomposition of its endomorphism
representation ``dual(sigma) (x) sigma`` into irreducibles, each recorded as a
``(dimension, Swan conductor)`` pair.  Distances between wild-inertia orbits
are tabulated data (see :mod:`ramicalc.ultrametric`).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple

from ._numtheory import is_prime
from .errors import DomainError, ValidationError
from .plf import (
    PLFunction,
    as_rational,
    derivative_jumps,
    evaluate,
    invert,
    max_affine_mean,
    scale_conj,
)
from .ultrametric import UltrametricReport, UltrametricTable, validate_ultrametric

__all__ = [
    "GaloisDecomposition",
    "SigmaJumpDiagnostic",
    "UltrametricReport",
    "UltrametricTable",
    "delta_from_pairing",
    "least_sigma_jump",
    "restrict_tame_sigma",
    "sigma_function",
    "single_jump_diagnostic",
    "slope_of",
    "tame_distance_min",
    "twist_distance",
    "validate_ultrametric",
]


@dataclass(frozen=True)
class GaloisDecomposition:
    """``dim sigma`` and the irreducible constituents of ``dual(sigma) (x) sigma``."""

    dim_sigma: int
    components: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        comps = tuple((int(d), int(s)) for d, s in self.components)
        if self.dim_sigma < 1:
            raise ValidationError("positive_dim", f"dim sigma must be >= 1, got {self.dim_sigma}")
        if not comps:
            raise ValidationError("nonempty_components", "no components given")
        for d, s in comps:
            if d < 1 or s < 0:
                raise ValidationError("component_range", f"component ({d}, {s}) needs dim >= 1 and swan >= 0")
        total = sum(d for d, _ in comps)
        if total != self.dim_sigma ** 2:
            raise ValidationError(
                "dimension_sum", f"component dimensions sum to {total}, expected dim^2 = {self.dim_sigma ** 2}"
            )
        if (1, 0) not in comps:
            raise ValidationError("trivial_component", "the trivial constituent (1, 0) is missing")
        object.__setattr__(self, "components", tuple(sorted(comps)))


def slope_of(dim: int, swan: int) -> Fraction:
    """Swan conductor divided by dimension."""
    if dim < 1:
        raise DomainError(f"dimension must be positive, got {dim}")
    return Fraction(swan, dim)


def sigma_function(d: GaloisDecomposition) -> PLFunction:
    """``x -> (dim sigma)^-2 * sum_i max(x dim_i, sw_i)``."""
    return max_affine_mean(d.dim_sigma ** 2, d.components)


def delta_from_pairing(sigma_fn: PLFunction, varsigma) -> Fraction:
    """The unique ``delta`` with ``sigma_fn(delta) == varsigma``."""
    varsigma = as_rational(varsigma)
    if varsigma < evaluate(sigma_fn, sigma_fn.domain_start):
        raise DomainError(f"{varsigma} lies below the minimum value of the decomposition function")
    return evaluate(invert(sigma_fn), varsigma)


def restrict_tame_sigma(sigma_fn: PLFunction, e: int) -> PLFunction:
    """Decomposition function after restriction to a tame extension of ramification ``e``.

    Only meaningful when the representation is totally wild; the caller vouches
    for that since it cannot be read off the function.
    """
    if e < 1:
        raise DomainError(f"ramification index must be positive, got {e}")
    return scale_conj(sigma_fn, e)


def tame_distance_min(conjugate_distances: Sequence, e: int) -> Fraction:
    """Recover a distance over the base field from the distances between conjugates upstairs."""
    if not conjugate_distances:
        raise DomainError("empty list of conjugate distances")
    if e < 1:
        raise DomainError(f"ramification index must be positive, got {e}")
    return min(as_rational(v) for v in conjugate_distances) / e


@dataclass(frozen=True)
class SigmaJumpDiagnostic:
    a: Fraction
    mode: str
    e_ti: int
    integral: bool
    p_integral: bool
    interpretation: str

    @property
    def consistent(self) -> bool:
        return self.integral and self.p_integral


def least_sigma_jump(sigma_fn: PLFunction, p: int, mode: str = "absolutely_wild", e_ti: int = 1) -> SigmaJumpDiagnostic:
    """Least slope change ``a`` of a decomposition function, with integrality checks.

    ``mode="absolutely_wild"`` expects ``a`` to be a positive integer.
    ``mode="general"`` takes the ramification index ``e_ti`` of the
    imprimitivity field and expects ``a * e_ti`` to be an integer; in both
    modes ``a`` should have denominator prime to ``p``.  Failed checks mean the
    data cannot come from a representation of the stated kind; they are
    reported, not raised.
    """
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    jumps = derivative_jumps(sigma_fn)
    if not jumps:
        raise DomainError("decomposition function has no slope change (tame representation)")
    a = jumps[0].x
    if mode == "absolutely_wild":
        e_ti = 1
    elif mode == "general":
        if e_ti < 1:
            raise DomainError(f"e_ti must be positive, got {e_ti}")
    else:
        raise DomainError(f"unknown mode {mode!r}")
    scaled = a * e_ti
    return SigmaJumpDiagnostic(
        a=a,
        mode=mode,
        e_ti=e_ti,
        integral=scaled.denominator == 1 and scaled > 0,
        p_integral=a.denominator % p != 0,
        interpretation=(
            f"a = min sw(chi)/{e_ti} over nontrivial characters chi in D(sigma^T_I)"
            if mode == "general"
            else "a = min sw(chi) over nontrivial characters chi in D(sigma)"
        ),
    )


def twist_distance(sigma_fn: PLFunction, c: int) -> Tuple[Fraction, bool]:
    """Bound on the distance from ``sigma`` to a twist by a character of conductor ``c``.

    Returns ``(c, exact)``; ``exact`` is true when the decomposition function
    has no slope change at ``c``.
    """
    if c < 1:
        raise DomainError(f"conductor must be a positive integer, got {c}")
    c = Fraction(c)
    return c, all(j.x != c for j in derivative_jumps(sigma_fn))


def single_jump_diagnostic(sigma_fn: PLFunction, p: int, r: int) -> Optional[str]:
    """Note on the Galois group of the kernel field when there is exactly one slope change."""
    if len(derivative_jumps(sigma_fn)) != 1:
        return None
    return f"Gal(E/F) elementary abelian of order {p}^{2 * r} = {p ** (2 * r)}"

