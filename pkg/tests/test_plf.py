import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ramicalc import (
    IDENTITY,
    DomainError,
    NotInvertibleError,
    PLFunction,
    ValidationError,
    agree_from,
    certify,
    compose,
    derivative_jumps,
    evaluate,
    invert,
    max_affine_mean,
    scale_conj,
)
from ramicalc.plf import as_rational, format_rational, from_csv, slope_left, slope_right, to_csv

from gen import rand_rational, random_pl, random_terms


def naive_eval(f, x):
    """Segment scan: find the segment containing x by linear search."""
    pts = list(f.points)
    for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
        if x0 <= x <= x1:
            return y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    xl, yl = pts[-1]
    return yl + f.terminal_slope * (x - xl)


def naive_max_sum(n, terms, x):
    return sum(max(a * x, b) for a, b in terms) / F(n)


# -- construction and canonical form ---------------------------------------


def test_collinear_points_are_merged():
    f = PLFunction(((0, 0), (1, 1), (2, 2), (3, 4)), 2)
    assert f.points == ((0, 0), (2, 2))
    assert f.terminal_slope == 2


def test_trailing_point_on_terminal_ray_is_dropped():
    assert PLFunction(((0, 0), (5, 5)), 1) == IDENTITY


def test_rejects_floats_and_bad_order():
    with pytest.raises(TypeError):
        PLFunction(((0.0, 0),), 1)
    with pytest.raises(ValidationError):
        PLFunction(((0, 0), (0, 1)), 1)
    with pytest.raises(DomainError):
        PLFunction(((-1, 0),), 1)


def test_as_rational_strings():
    assert as_rational("3/8") == F(3, 8)
    assert as_rational(" -2 ") == -2
    with pytest.raises(ValueError):
        as_rational("0.5")
    assert format_rational(F(6, 3)) == "2"
    assert format_rational(F(-5, 16)) == "-5/16"


def test_canonical_equality_matches_function_equality():
    rng = random.Random(7)
    for _ in range(100):
        f = random_pl(rng)
        # insert redundant points on every segment and on the terminal ray
        extra = list(f.points)
        for (x0, _), (x1, _) in zip(f.points, f.points[1:]):
            mid = (x0 + x1) / 2
            extra.append((mid, f(mid)))
        far = f.xs[-1] + 3
        extra.append((far, f(far)))
        g = PLFunction(tuple(sorted(extra)), f.terminal_slope)
        assert g == f
        assert hash(g) == hash(f)


# -- eval --------------------------------------------------------------------


def test_eval_identity():
    assert evaluate(IDENTITY, F(7, 3)) == F(7, 3)


def test_eval_structure_function_example():
    f = PLFunction.from_slopes(F(5, 16), [(F(1, 4), F(1, 4))], F(1, 2))
    assert f(0) == F(5, 16)
    assert f(F(1, 2)) == F(1, 2)


def test_eval_matches_segment_scan():
    rng = random.Random(11)
    f = random_pl(rng, pieces=5)
    for _ in range(100):
        x = rand_rational(rng, 0, 40, 24)
        assert evaluate(f, x) == naive_eval(f, x)


def test_eval_negative_argument():
    with pytest.raises(DomainError):
        evaluate(IDENTITY, -1)


def test_one_sided_slopes(psi86):
    assert slope_right(psi86, 0) == F(1, 4)
    assert slope_left(psi86, F(1, 3)) == F(1, 4)
    assert slope_right(psi86, F(1, 3)) == 4
    assert slope_left(psi86, F(1, 2)) == 2
    assert slope_left(psi86, F(1, 5)) == F(1, 4)
    assert slope_left(psi86, 9) == 1


# -- invert ------------------------------------------------------------------


def test_invert_identity():
    assert invert(IDENTITY) == IDENTITY


def test_invert_two_slope_structure_function():
    f = PLFunction.from_slopes(F(2, 9), [(F(1, 3), F(1, 3))], 1)
    g = invert(f)
    assert g.domain_start == F(2, 9)
    assert g(F(2, 9)) == 0
    assert g.slopes == (3, 1)
    assert g.xs == (F(2, 9), F(1, 3))
    rng = random.Random(3)
    for _ in range(50):
        x = rand_rational(rng, 0, 3, 30)
        assert g(f(x)) == x


def test_invert_rejects_flat_segment():
    with pytest.raises(NotInvertibleError):
        invert(PLFunction(((0, 0), (1, 1)), 0))


def test_invert_is_involution():
    rng = random.Random(5)
    for _ in range(200):
        f = random_pl(rng, pieces=rng.randint(1, 6), increasing=True)
        assert invert(invert(f)) == f


# -- compose -----------------------------------------------------------------


def test_compose_identity_left():
    g = random_pl(random.Random(1), increasing=True)
    assert compose(IDENTITY, g) == g


def test_compose_with_inverse_is_identity_on_range():
    rng = random.Random(9)
    for _ in range(50):
        f = random_pl(rng, increasing=True)
        h = compose(f, invert(f))
        assert h.domain_start == f(0)
        assert h.slopes == (1,)
        assert h(h.domain_start) == h.domain_start


def test_compose_pointwise():
    rng = random.Random(13)
    for _ in range(50):
        g = random_pl(rng, pieces=4)
        if g.terminal_slope < 0:
            continue
        lo = min(y for _, y in g.points)
        f = random_pl(rng, pieces=4, start=max(lo, 0) if lo >= 0 else 0)
        if lo < f.domain_start:
            with pytest.raises(DomainError):
                compose(f, g)
            continue
        h = compose(f, g)
        for _ in range(30):
            x = rand_rational(rng, 0, 40, 12)
            assert h(x) == naive_eval(f, naive_eval(g, x))


def test_compose_slope_table(prof86, dec86):
    phi = PLFunction.from_slopes(F(5, 16), [(F(1, 4), F(1, 4)), (F(1, 2), F(1, 2))], 1)
    sigma = max_affine_mean(16, [(1, 0)] + [(3, 1)] * 5)
    psi = compose(invert(phi), sigma)
    assert psi.xs == (0, F(1, 3), F(3, 8), F(1, 2))
    assert psi.slopes == (F(1, 4), 4, 2, 1)


def test_compose_domain_mismatch():
    f = PLFunction(((1, 0),), 1)
    with pytest.raises(DomainError):
        compose(f, IDENTITY)


# -- scale_conj --------------------------------------------------------------


def test_scale_conj_unit_and_multiplicative():
    f = random_pl(random.Random(2))
    assert scale_conj(f, 1) == f
    assert scale_conj(scale_conj(f, 2), 3) == scale_conj(f, 6)


def test_scale_conj_by_hand():
    phi = PLFunction.from_slopes(F(2, 9), [(F(1, 3), F(1, 3))], 1)
    g = scale_conj(phi, 2)
    assert g(0) == F(4, 9)
    assert g.xs == (0, F(2, 3))
    assert g(F(2, 3)) == F(2, 3)


def test_scale_conj_rejects_zero():
    with pytest.raises(DomainError):
        scale_conj(IDENTITY, 0)


# -- max_affine_mean ---------------------------------------------------------


def test_max_affine_mean_identity():
    assert max_affine_mean(1, [(1, 0)]) == IDENTITY


def test_max_affine_mean_two_slopes():
    terms = [(1, 0)] + [(3, 1)] * 5
    f = max_affine_mean(16, terms)
    for x in (0, F(1, 4), F(1, 3), F(1, 2)):
        assert f(x) == naive_max_sum(16, terms, x)
    assert f(0) == F(5, 16)
    assert f.slopes == (F(1, 16), 1)
    assert f.xs == (0, F(1, 3))


def test_max_affine_mean_matches_brute_force():
    rng = random.Random(17)
    for _ in range(30):
        n = rng.randint(1, 20)
        terms = random_terms(rng)
        f = max_affine_mean(n, terms)
        assert certify(f).convex
        assert f.terminal_slope == F(sum(a for a, _ in terms), n)
        for _ in range(100):
            x = rand_rational(rng, 0, 10, 36)
            assert f(x) == naive_max_sum(n, terms, x)


def test_max_affine_mean_errors():
    with pytest.raises(DomainError):
        max_affine_mean(3, [])
    with pytest.raises(DomainError):
        max_affine_mean(3, [(1, 2)])


# -- jumps, certification, agreement ----------------------------------------


def test_jumps(psi86):
    assert derivative_jumps(IDENTITY) == []
    assert [(j.x, j.left_slope, j.right_slope) for j in derivative_jumps(psi86)] == [
        (F(1, 3), F(1, 4), 4),
        (F(3, 8), 4, 2),
        (F(1, 2), 2, 1),
    ]


def test_jumps_are_genuine_on_random_functions():
    rng = random.Random(19)
    for _ in range(100):
        f = random_pl(rng, pieces=6)
        reported = {j.x for j in derivative_jumps(f)}
        assert all(j.left_slope != j.right_slope for j in derivative_jumps(f))
        assert reported == set(f.xs[1:])


def test_certify(psi86):
    assert certify(IDENTITY) == (True, True)
    assert certify(max_affine_mean(16, [(1, 0)] + [(3, 1)] * 5)) == (True, True)
    assert certify(psi86) == (False, True)


def test_agree_from():
    phi = PLFunction.from_slopes(F(2, 9), [(F(1, 3), F(1, 3))], 1)
    assert agree_from(phi, phi) == 0
    assert agree_from(phi, IDENTITY) == F(1, 3)
    assert agree_from(IDENTITY, PLFunction(((0, 0),), 2)) is None
    assert agree_from(IDENTITY, PLFunction(((0, 1),), 1)) is None


# -- CSV -------------------------------------------------------------------


def test_csv_round_trip(psi86):
    text = to_csv(psi86)
    assert text.splitlines() == ["x,y,right_slope", "0,0,1/4", "1/3,1/12,4", "3/8,1/4,2", "1/2,1/2,1"]
    assert from_csv(text) == psi86


def test_csv_slope_mismatch():
    with pytest.raises(ValidationError):
        from_csv("x,y,right_slope\n0,0,2\n1,1,1\n")


# -- algebraic identities (hypothesis) --------------------------------------

small = st.fractions(min_value=0, max_value=10, max_denominator=12)


@st.composite
def increasing_pl(draw):
    n = draw(st.integers(1, 5))
    y0 = draw(small)
    slopes = draw(st.lists(st.fractions(min_value=F(1, 9), max_value=5, max_denominator=9), min_size=n, max_size=n))
    steps = draw(st.lists(st.fractions(min_value=F(1, 8), max_value=4, max_denominator=8), min_size=n - 1, max_size=n - 1))
    x, y, pts = F(0), y0, [(F(0), y0)]
    for s, h in zip(slopes, steps):
        x, y = x + h, y + s * h
        pts.append((x, y))
    return PLFunction(tuple(pts), slopes[-1])


@settings(max_examples=150, deadline=None)
@given(increasing_pl(), increasing_pl(), st.integers(1, 6))
def test_scale_conj_commutes_with_compose_and_invert(f, g, e):
    gi = invert(g)
    assert invert(scale_conj(f, e)) == scale_conj(invert(f), e)
    fg = compose(f, g)
    assert compose(scale_conj(f, e), scale_conj(g, e)) == scale_conj(fg, e)
    assert sorted(scale_conj(f, e).slopes) == sorted(f.slopes)
    assert certify(scale_conj(f, e)) == certify(f)
    assert compose(gi, g) == IDENTITY


@settings(max_examples=100, deadline=None)
@given(increasing_pl(), small)
def test_inverse_law_pointwise(f, x):
    assert invert(f)(f(x)) == x
