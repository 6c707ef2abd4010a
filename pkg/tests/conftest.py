import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # make oracles importable

from swipenet import kernels


@pytest.fixture(params=sorted(["numpy"] + (["numba"] if kernels.HAS_NUMBA else [])))
def backend(request):
    """Run a test under each available kernel backend."""
    saved = kernels.backend()
    kernels.use_backend(request.param)
    yield request.param
    kernels.use_backend(saved)


@pytest.fixture
def numpy_backend():
    saved = kernels.backend()
    kernels.use_backend("numpy")
    yield
    kernels.use_backend(saved)
