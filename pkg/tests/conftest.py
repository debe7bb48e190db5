import numpy as np
import pytest

from fockcalc import random_functionals

ACCEPTANCE_SEED = 20260811


@pytest.fixture(scope="session")
def corpus1000():
    """Shared acceptance corpus: 1000 functionals, support <= {0..12}, <= 24 terms."""
    return random_functionals(1000, ACCEPTANCE_SEED, support_max=12, max_terms=24)


@pytest.fixture(scope="session")
def bridge_corpus200():
    """Pathwise corpus: 200 functionals fitting inside horizon 8."""
    return random_functionals(200, ACCEPTANCE_SEED + 1, support_max=7, max_terms=24)


@pytest.fixture()
def rng():
    return np.random.Generator(np.random.PCG64(99))
