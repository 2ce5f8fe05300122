import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from zaremba.cf_core import Alphabet
from zaremba.orbit import DET_PLUS_ONE, enumerate_ball


@pytest.fixture(scope="session")
def a12():
    return Alphabet.of(1, 2)


@pytest.fixture(scope="session")
def a15():
    return Alphabet.of(1, 2, 3, 4, 5)


@pytest.fixture(scope="session")
def oct3():
    """Three-member truncation of the 1 + 8k progression."""
    return Alphabet.of(1, 9, 17)


@pytest.fixture(scope="session")
def gamma_ball_2000(a15):
    """det +1 ball for {1..5} at norm 2000, shared by the circle tests."""
    return enumerate_ball(a15, 2000, DET_PLUS_ONE)
