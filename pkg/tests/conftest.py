import numpy as np
import pytest

from meshsteg import normalize
from meshsteg.synthetic import icosphere, noised_grid, noisy_sphere, tetrahedron, torus


@pytest.fixture
def tetra():
    return tetrahedron()


@pytest.fixture
def unit_tetra():
    return normalize(tetrahedron())


@pytest.fixture
def sphere3():
    return icosphere(3)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def small_cover(rng):
    """Normalized noisy sphere, 642 vertices."""
    return normalize(noisy_sphere(3, noise=0.03, rng=rng))


@pytest.fixture
def grid_mesh(rng):
    return noised_grid(12, 12, noise=0.05, rng=rng)


@pytest.fixture
def torus_mesh():
    return torus(20, 12)
