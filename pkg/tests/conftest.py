import numpy as np
import pytest

from geneo import identity_homomorphism, symmetric_group
from geneo.action import SignedMeasure

# functions X -> X for X = {0, 1, 2}; R1..R6 follow the permutation matrices
# of the Sym(3) averaging example (row i has its 1 in column h[i])
R1, R2, R3 = (0, 1, 2), (1, 2, 0), (2, 0, 1)
R4, R5, R6 = (2, 1, 0), (1, 0, 2), (0, 2, 1)


@pytest.fixture(scope="session")
def s3():
    return identity_homomorphism(symmetric_group(3))


@pytest.fixture
def third():
    return np.full((3, 3), 1 / 3)


@pytest.fixture
def rotation_mu(s3):
    return SignedMeasure(s3, {R1: 1 / 3, R2: 1 / 3, R3: 1 / 3})


@pytest.fixture
def reflection_nu(s3):
    return SignedMeasure(s3, {R4: 1 / 3, R5: 1 / 3, R6: 1 / 3})


@pytest.fixture
def rng():
    return np.random.default_rng(20261019)
