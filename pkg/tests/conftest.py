import numpy as np
import pytest

from phasesynth import _kernels_py

try:
    from phasesynth import _kernels as _kernels_cy
except ImportError:  # extension not built
    _kernels_cy = None

BACKENDS = [pytest.param(_kernels_py, id="python")]
if _kernels_cy is not None:
    BACKENDS.append(pytest.param(_kernels_cy, id="cython"))


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_phases(rng, size, lo=0.05, hi=np.pi / 2 - 0.05):
    return rng.uniform(lo, hi, size)
