import numpy as np
import pytest

from gbss.state import random_physical_spec


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def random_spec(rng):
    def make(n, m):
        return random_physical_spec(n, m, rng)

    return make
