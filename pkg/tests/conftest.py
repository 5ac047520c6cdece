import numpy as np
import pytest
from hypothesis import HealthCheck, settings

import striplab as sl

settings.register_profile(
    "ci",
    derandomize=True,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ci")


@pytest.fixture(scope="session")
def chirp5():
    return sl.build_chirp(5)


@pytest.fixture(scope="session")
def chirp7():
    return sl.build_chirp(7)


@pytest.fixture(scope="session")
def chirp31():
    return sl.build_chirp(31)


@pytest.fixture(scope="session")
def dg10():
    return sl.build_delsarte_goethals(1, 0)


@pytest.fixture(scope="session")
def simplex3():
    return sl.build_simplex_etf(3)


@pytest.fixture(scope="session")
def identity4():
    return sl.SensingMatrix(np.eye(4), family="identity")


@pytest.fixture(scope="session")
def family_zoo(chirp5, dg10, simplex3):
    """One small instance per family, for cross-family property tests."""
    return {
        "gaussian": sl.build_gaussian(6, 18, seed=42),
        "random-harmonic": sl.build_random_harmonic(8, 32, seed=7),
        "chirp": chirp5,
        "simplex-etf": simplex3,
        "reed-muller": sl.build_reed_muller(5, 1),
        "delsarte-goethals": dg10,
        "sub-fourier": sl.build_sub_fourier(11, 3, [1, 0, 0, 0], 3),
    }
