from fractions import Fraction as F

import pytest

from ramicalc import EndoClassProfile, GaloisDecomposition, Level, PLFunction, minimal_profile

from gen import two_slope_decomposition


@pytest.fixture
def prof86():
    return EndoClassProfile(
        p=2, deg=4, e=4, f=1, m=F(1, 2), k0=F(-1, 4),
        jumps=(F(1, 4), F(1, 2)), levels=(Level(4, 4, 5), Level(2, 2, 1)),
    )


@pytest.fixture
def dec86():
    return GaloisDecomposition(4, ((1, 0),) + ((3, 1),) * 5)


@pytest.fixture
def psi86():
    return PLFunction.from_slopes(0, [(F(1, 4), F(1, 3)), (4, F(3, 8)), (2, F(1, 2))], 1)


@pytest.fixture
def prof85():
    """Degree-3 totally wild class with m = 1 (normalized level 1/3)."""
    return minimal_profile(1, 3, 3)


@pytest.fixture
def dec85():
    return two_slope_decomposition(1, 3)
