import numpy as np
import pytest

from polarsolve import ModelParams


@pytest.fixture
def baseline():
    """The benchmark configuration: w=1, everything else at defaults."""
    return ModelParams(w=1.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20260814)
