import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from certbit.rng import RandomStream


@pytest.fixture
def rng():
    return RandomStream(12345)


@pytest.fixture
def make_rng():
    def factory(seed=12345):
        return RandomStream(seed)

    return factory
