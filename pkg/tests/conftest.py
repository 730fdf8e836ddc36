import numpy as np
import pytest

from covertsim import SystemConfig, _backend


@pytest.fixture(params=_backend.available_backends())
def backend(request):
    """Run backend-sensitive tests under every built sampling backend."""
    return request.param


@pytest.fixture
def paper_config():
    """The standard evaluation scenario: 500 users, unit noise and channel
    variances, unit max power."""
    return SystemConfig(M=500, P_max=1.0, sigma_b2=1.0, sigma_w2=1.0,
                        epsilon=0.05, h_ab2=1.0)


@pytest.fixture(autouse=True)
def _no_global_state():
    """Guard: sampling helpers must not leak numpy global RNG state."""
    state = np.random.get_state()[1][:3].copy()
    yield
    assert (np.random.get_state()[1][:3] == state).all()
