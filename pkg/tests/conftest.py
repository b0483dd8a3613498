import functools

import numpy as np
import pytest

from bicircle import CoeffSet, OrthoSystem, compute_moments
from bicircle import densities


@functools.lru_cache(maxsize=None)
def build(name, N=4, M=4, grid=256):
    """Moments, system and coefficient set of a named catalogue density, cached per session."""
    p = dict(densities.catalogue())[name]
    table = compute_moments(p, N, M, grid_size=grid)
    sys = OrthoSystem(table, N, M)
    return p, table, sys, CoeffSet.build(sys)


CATALOGUE = [name for name, _ in densities.catalogue()]
BS_BASES = {name: (p.deg_z, p.deg_w) for name, p in densities.catalogue()}


@pytest.fixture(params=CATALOGUE)
def measure(request):
    return (request.param,) + build(request.param)


@pytest.fixture
def diag():
    return build("diagonal")


@pytest.fixture
def leb():
    return build("lebesgue")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
