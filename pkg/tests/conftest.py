import numpy as np
import pytest

from phaselab import linalg


@pytest.fixture
def rng():
    return np.random.default_rng(0x5EED)


@pytest.fixture(params=linalg.available_backends())
def backend(request):
    previous = linalg.set_backend(request.param)
    yield request.param
    linalg.set_backend(previous)
