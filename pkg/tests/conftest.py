
import pytest

from services.cartan import double_extend
from services.exactform import QuadSpace


@pytest.fixture(scope="session")
def a1_ext():
    return double_extend("A", 1)


@pytest.fixture(scope="session")
def a2_ext():
    return double_extend("A", 2)


@pytest.fixture(scope="session")
def b3_ext():
    return double_extend("B", 3)


@pytest.fixture(scope="session")
def d4_ext():
    return double_extend("D", 4)


@pytest.fixture
def euclidean3():
    return QuadSpace.diagonal([1, 1, 1])


@pytest.fixture
def lorentz3():
    return QuadSpace.diagonal([1, 1, -1])


@pytest.fixture
def a2_base(a2_ext):
    """V^{1/2} of A2: gram (1, -1/2; -1/2, 1)."""
    return a2_ext.base

