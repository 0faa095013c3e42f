from fractions import Fraction

import pytest

from multimeixner.harness import canonical_lambda, canonical_system, random_system
from multimeixner.numerics import ScalarMode

ROUTE_SEEDS = (23, 42, 202)


@pytest.fixture(scope="session")
def canonical_matrix():
    return canonical_lambda()


@pytest.fixture(scope="session")
def canonical_beta2():
    return canonical_system(2)


@pytest.fixture(scope="session")
def canonical_beta2_float():
    return canonical_system(2, ScalarMode.FLOAT)


@pytest.fixture(scope="session")
def seeded_systems():
    return [random_system(seed, 2, 2) for seed in ROUTE_SEEDS]


@pytest.fixture(scope="session")
def beta_values():
    return (Fraction(1), Fraction(2), Fraction(7, 3))
