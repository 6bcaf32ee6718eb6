import pytest

from bgls_osc import apply_operator, fourier_kernel, witness_f0


@pytest.fixture(scope="session")
def kernel():
    return fourier_kernel()


@pytest.fixture(scope="session")
def f0():
    return witness_f0()


@pytest.fixture(scope="session")
def field8(kernel, f0):
    """u = T_8 f0 on the default grid, shared across tests."""
    return apply_operator(kernel, 8.0, f0, x_points=128)
