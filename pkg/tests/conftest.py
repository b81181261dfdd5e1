import numpy as np
import pytest

from gohberg_bench.group import Cyclic, GroupSpec, Torus


@pytest.fixture
def z8():
    return GroupSpec.cyclic(8)


@pytest.fixture
def circle():
    """T^1 with the smallest grid for window 31."""
    return GroupSpec.torus(31)


@pytest.fixture
def circle64():
    return GroupSpec.torus(64, grid=129)


@pytest.fixture
def plane():
    return GroupSpec.torus(32, dims=2, grid=65)


@pytest.fixture
def mixed():
    """T^1 x Z_3 with an oversampled torus grid."""
    return GroupSpec(factors=(Torus(grid=20, window=6), Cyclic(order=3)))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
