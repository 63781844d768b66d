import numpy as np
import pytest

from qspectra import Quaternion


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def q(w=0.0, x=0.0, y=0.0, z=0.0) -> Quaternion:
    return Quaternion(float(w), float(x), float(y), float(z))
