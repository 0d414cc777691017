import numpy as np
import pytest

from bellfusion.bsm import Scheme, derive_classification_table


@pytest.fixture
def rng():
    return np.random.default_rng(20260814)


@pytest.fixture(scope="session")
def standard_table():
    return derive_classification_table(Scheme.STANDARD)


@pytest.fixture(scope="session")
def boosted_table():
    return derive_classification_table(Scheme.BOOSTED)
