import cmath
import math

import pytest

from complextrees.config import reset_config
from complextrees.core import Alphabet

TAU = (1.0 + math.sqrt(5.0)) / 2.0
# Root of 1 + z + 2z^2 in the upper half plane.
Z0 = complex(-1.0, math.sqrt(7.0)) / 4.0


@pytest.fixture(autouse=True)
def fresh_config():
    reset_config()
    yield
    reset_config()


@pytest.fixture
def fig4_alphabet():
    return Alphabet((0.5j, 0.5, -0.5j))


@pytest.fixture
def cantor_alphabet():
    return Alphabet((0.1, -0.1))


@pytest.fixture
def sierpinski_alphabet():
    w = 0.5 * cmath.exp(2j * math.pi / 3)
    return Alphabet((w, 0.5, w.conjugate()))


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running cloud and scan checks")
