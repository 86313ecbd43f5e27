import numpy as np
import pytest

from discrisk.datasets import load_dataset
from discrisk.distributions import CountModel


@pytest.fixture(scope="session")
def data_o():
    return load_dataset("O")


@pytest.fixture(scope="session")
def poisson9():
    return CountModel.poisson(9.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
