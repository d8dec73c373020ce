import numpy as np
import pytest

SEED = 90210


@pytest.fixture
def rng():
    return np.random.default_rng(SEED)
