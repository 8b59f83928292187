import numpy as np
import pytest

from pdx import delaunay


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20260810)


@pytest.fixture(scope="session")
def small_cloud():
    r = np.random.default_rng(7)
    return r.random((400, 2)) * 20.0


@pytest.fixture(scope="session")
def small_triangulation(small_cloud):
    return delaunay.build(small_cloud)
