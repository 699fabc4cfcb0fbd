import random
from dataclasses import replace
from fractions import Fraction as F

import pytest

from ramicalc import (
    IDENTITY,
    DomainError,
    EndoClassProfile,
    InconsistentDataError,
    Level,
    PairingInput,
    UltrametricTable,
    ValidationError,
    certify,
    derivative_jumps,
    minimal_c,
    minimal_profile,
    mixed_level_distance,
    pairing_varsigma,
    scale_conj,
    structure_function,
    swan_exponent,
    tame_lift_structure,
    truncation_classes,
    twist_level,
    validate_ultrametric,
    varsigma_table,
)

from gen import profile, random_ultrametric


# -- profiles ---------------------------------------------------------------


def test_degree_four_profile(prof86):
    phi = structure_function(prof86)
    assert phi(0) == F(5, 16)
    assert phi.slopes == (F(1, 4), F(1, 2), 1)
    assert [j.x for j in derivative_jumps(phi)] == [F(1, 4), F(1, 2)]
    assert certify(phi) == (True, True)


def test_degree_three_profile(prof85):
    assert prof85.levels == (Level(3, 3, 2),)
    phi = structure_function(prof85)
    assert phi(0) == F(2, 9)
    assert phi.slopes == (F(1, 3), 1)
    assert phi.xs == (0, F(1, 3))


def test_trivial_profile():
    assert structure_function(EndoClassProfile.trivial_class(2)) == IDENTITY


def _bad(prof86, **kw):
    fields = dict(p=2, deg=4, e=4, f=1, m=F(1, 2), k0=F(-1, 4), jumps=(F(1, 4), F(1, 2)),
                  levels=(Level(4, 4, 5), Level(2, 2, 1)))
    fields.update(kw)
    with pytest.raises(ValidationError) as info:
        EndoClassProfile(**fields)
    return info.value.invariant


@pytest.mark.parametrize(
    "changes,invariant",
    [
        (dict(p=4), "prime_p"),
        (dict(f=2), "ef_equals_deg"),
        (dict(m=F(-1, 2)), "positive_m"),
        (dict(m=F(1, 3), jumps=(F(1, 4), F(1, 3))), "m_denominator"),
        (dict(k0=F(1, 4)), "k0_negative"),
        (dict(k0=None), "k0_negative"),
        (dict(jumps=()), "nonempty_jumps"),
        (dict(levels=(Level(4, 4, 5),)), "levels_match_jumps"),
        (dict(jumps=(F(1, 2), F(1, 4))), "jumps_increasing"),
        (dict(jumps=(F(1, 4), F(3, 4))), "last_jump_is_m"),
        (dict(k0=F(-3, 4)), "k0_bound"),
        (dict(k0=F(-1, 2)), "least_jump"),
        (dict(levels=(Level(4, 3, 5), Level(2, 2, 1))), "ex_divides_d"),
        (dict(levels=(Level(2, 2, 5), Level(2, 2, 1))), "first_level_degree"),
        (dict(levels=(Level(4, 2, 5), Level(2, 2, 1))), "first_level_ramification"),
        (dict(levels=(Level(4, 4, 5), Level(4, 4, 1))), "degrees_decrease"),
        (dict(levels=(Level(4, 4, 6), Level(2, 2, 1))), "continuity"),
        (dict(levels=(Level(4, 4, 9), Level(2, 2, 2))), "continuity_at_m"),
    ],
)
def test_profile_invariants_are_named(prof86, changes, invariant):
    assert _bad(prof86, **changes) == invariant


def test_degree_one_needs_null_k0():
    with pytest.raises(ValidationError) as info:
        EndoClassProfile(p=2, deg=1, e=1, f=1, m=1, k0=F(-1), jumps=(1,), levels=((1, 1, 0),))
    assert info.value.invariant == "k0_degree_one"


def test_random_profiles_have_expected_shape():
    rng = random.Random(43)
    for _ in range(200):
        prof = profile(rng)
        phi = structure_function(prof)
        assert certify(phi) == (True, True)
        assert phi.terminal_slope == 1
        assert phi(prof.m) == prof.m
        for y, lev, lo in zip(prof.jumps, prof.levels, (F(0),) + prof.jumps):
            assert phi.slopes[phi.xs.index(lo)] == F(1, lev.d)
        # jumps of phi' are exactly the points where d changes (d = 1 merges at m)
        expected = [y for y, a, b in zip(prof.jumps, prof.levels, prof.levels[1:] + (Level(1, 1, 0),)) if a.d != b.d]
        assert [j.x for j in derivative_jumps(phi)] == expected


# -- minimal elements ---------------------------------------------------------


@pytest.mark.parametrize("m,e,f,c", [(1, 2, 1, 1), (1, 1, 1, 0), (3, 4, 2, 42)])
def test_minimal_c(m, e, f, c):
    assert minimal_c(m, e, f) == c


def test_minimal_c_requires_coprime():
    with pytest.raises(DomainError):
        minimal_c(2, 4, 1)


def test_minimal_profile_examples():
    assert structure_function(minimal_profile(1, 2, 2))(0) == F(1, 4)
    one = minimal_profile(1, 1, 2)
    assert one.k0 is None
    assert structure_function(one) == IDENTITY
    p = minimal_profile(2, 3, 3)
    assert p.m == F(2, 3) and p.levels[0].c == 4
    assert structure_function(p)(0) == F(4, 9)
    with pytest.raises(DomainError):
        minimal_profile(2, 4, 2)


# -- tame lift ----------------------------------------------------------------


def test_tame_lift_examples(prof85):
    assert tame_lift_structure(prof85, 1) == prof85
    lifted = tame_lift_structure(prof85, 2)
    assert lifted.m == F(2, 3) and lifted.levels[0].c == 4
    assert structure_function(lifted)(0) == F(4, 9)
    assert structure_function(lifted) == scale_conj(structure_function(prof85), 2)


def test_tame_lift_commutes_with_structure_function():
    rng = random.Random(47)
    for _ in range(100):
        prof = profile(rng)
        e = rng.randint(1, 6)
        assert structure_function(tame_lift_structure(prof, e)) == scale_conj(structure_function(prof), e)


def test_tame_lift_rejects_non_totally_wild():
    prof = EndoClassProfile(p=2, deg=3, e=3, f=1, m=F(1, 3), k0=F(-1, 3), jumps=(F(1, 3),), levels=((3, 3, 2),))
    with pytest.raises(DomainError):
        tame_lift_structure(prof, 2)
    with pytest.raises(DomainError):
        tame_lift_structure(minimal_profile(1, 2, 2), 0)


# -- pairings -----------------------------------------------------------------


def test_pairing_examples(prof86, prof85):
    assert pairing_varsigma(prof86, prof86, 0) == F(5, 16)
    triv = EndoClassProfile.trivial_class(3)
    assert pairing_varsigma(triv, triv, 3) == 3
    assert pairing_varsigma(prof85, triv, prof85.m) == prof85.m


def test_pairing_inconsistent(prof85):
    with pytest.raises(InconsistentDataError):
        pairing_varsigma(prof85, EndoClassProfile.trivial_class(3), 0)


@pytest.mark.parametrize("m1,m2,expected", [(F(1, 3), F(1, 2), F(1, 2)), (0, F(5, 4), F(5, 4)), (F(1, 2), F(1, 2), None)])
def test_mixed_level_distance(m1, m2, expected):
    assert mixed_level_distance(m1, m2) == expected


def test_swan_exponent():
    assert swan_exponent(PairingInput(12, 3, 4)) == 0
    assert swan_exponent(PairingInput(21, 4, 4)) == 5
    assert swan_exponent(PairingInput(0, 1, 1, 1)) == 0
    with pytest.raises(ValidationError):
        PairingInput(5, 2, 3, 1)


def _abc(d_ab, d_bc, d_ac):
    dist = {frozenset("ab"): d_ab, frozenset("bc"): d_bc, frozenset("ac"): d_ac}
    return UltrametricTable.from_function("abc", lambda x, y: dist[frozenset((x, y))])


def test_truncation_classes():
    t = _abc(1, F(1, 2), 1)
    assert truncation_classes(t, 5) == [["a", "b", "c"]]
    assert truncation_classes(t, F(1, 2)) == [["a"], ["b"], ["c"]]
    assert truncation_classes(t, F(3, 4)) == [["a"], ["b", "c"]]
    with pytest.raises(ValidationError):
        truncation_classes(_abc(3, 1, 1), 2)


def test_truncation_classes_are_balls():
    rng = random.Random(53)
    for _ in range(50):
        t = random_ultrametric(rng, 7)
        eps = F(rng.randint(1, 20), 4)
        classes = truncation_classes(t, eps)
        owner = {lab: i for i, cls in enumerate(classes) for lab in cls}
        for x in t.labels:
            for y in t.labels:
                assert (t.d(x, y) < eps) == (owner[x] == owner[y])


def test_varsigma_table_examples(prof85):
    single = varsigma_table({"x": prof85}, UltrametricTable(("x",), ((0,),)))
    assert single.dist == ((0,),)
    two = UltrametricTable.from_function("ab", lambda x, y: prof85.m)
    out = varsigma_table({"a": prof85, "b": prof85}, two)
    assert out.d("a", "b") == prof85.m
    assert validate_ultrametric(out).ok and not out.separating


def test_varsigma_table_mixed_levels(prof85):
    triv = EndoClassProfile.trivial_class(3)
    other = minimal_profile(2, 3, 3)
    profs = {"t": triv, "a": prof85, "b": other}
    t = UltrametricTable.from_function("tab", lambda x, y: mixed_level_distance(profs[x].m, profs[y].m))
    out = varsigma_table(profs, t)
    assert out.d("t", "a") == F(1, 3) and out.d("a", "b") == F(2, 3)


def test_varsigma_table_rejects_inconsistent(prof85):
    t = UltrametricTable.from_function("ab", lambda x, y: 0 if x == y else F(1, 6))
    with pytest.raises(InconsistentDataError):
        varsigma_table({"a": prof85, "b": EndoClassProfile.trivial_class(3)}, t)
    with pytest.raises(ValidationError):
        varsigma_table({"a": prof85}, t)


@pytest.mark.parametrize("m,k,expected", [(F(1, 2), 1, 1), (3, 1, 3), (2, 2, 2)])
def test_twist_level(m, k, expected):
    assert twist_level(m, k) == expected


def test_twist_level_rejects_k0():
    with pytest.raises(DomainError):
        twist_level(1, 0)
