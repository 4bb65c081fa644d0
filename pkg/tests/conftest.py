import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20241014)


def unit_vectors(rng, n):
    x = rng.normal(size=(n, 3))
    return x / np.linalg.norm(x, axis=1, keepdims=True)


@pytest.fixture
def points(rng):
    return lambda n: unit_vectors(rng, n)
