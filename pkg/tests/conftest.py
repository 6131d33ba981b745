import numpy as np
import pytest

from vortexgrating import kernels


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_report_header(config):
    return f"vortexgrating kernel backend: {kernels.BACKEND}"
