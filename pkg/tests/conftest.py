from fractions import Fraction

import pytest

from ultradiam.core import ultrametric

F = Fraction


@pytest.fixture
def one_point():
    return ultrametric([[0]])


@pytest.fixture
def two_point():
    return ultrametric([[0, 1], [1, 0]])


@pytest.fixture
def equilateral3():
    return ultrametric([[0, 1, 1], [1, 0, 1], [1, 1, 0]])


@pytest.fixture
def two_level():
    """Parts {0,1} and {2}: 1/2 inside the part, 1 across."""
    return ultrametric([[0, "1/2", 1], ["1/2", 0, 1], [1, 1, 0]])
