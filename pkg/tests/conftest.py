import numpy as np
import pytest

from squeezedho import _kernels
from squeezedho.fock import TruncationPolicy


@pytest.fixture(params=_kernels.available_backends())
def backend(request):
    """Run a test once per available kernel backend."""
    previous = _kernels.BACKEND
    _kernels.use_backend(request.param)
    yield request.param
    _kernels.use_backend(previous)


@pytest.fixture
def small_policy():
    return TruncationPolicy(n_max=64, guard_band=8, tail_tolerance=1e-12)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    from . import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.RESULTS:
            terminalreporter.write_line(line)
