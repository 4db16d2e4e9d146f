"""Pytest configuration and shared fixtures."""

import math

import numpy as np
import pytest

from src.config import AppConfig, SolverConfig
from src.models.distributions import JointDist, ProbVec
from src.models.envelope import SubGaussianParams
from src.models.learner import LearnerInstance
from src.utils.rng import stream


@pytest.fixture
def test_config():
    """Configuration with single-threaded execution."""
    config = AppConfig()
    config.runtime.threads = 1
    return config


@pytest.fixture
def solver_config():
    return SolverConfig()


@pytest.fixture
def rng():
    """Seeded generator; each test gets the same stream."""
    return stream(1234, "tests")


@pytest.fixture
def bern_half():
    return ProbVec.bernoulli(0.5)


@pytest.fixture
def bern_quarter():
    return ProbVec.bernoulli(0.25)


@pytest.fixture
def diagonal_joint():
    """Perfectly correlated uniform bit."""
    return JointDist.from_matrix([[0.5, 0.0], [0.0, 0.5]])


@pytest.fixture
def correlated_joint():
    """Uniform bits that agree with probability 3/4."""
    return JointDist.from_matrix([[0.375, 0.125], [0.125, 0.375]])


@pytest.fixture
def product_joint():
    return JointDist.independent(ProbVec.bernoulli(0.3), ProbVec.from_masses([0.2, 0.5, 0.3]))


@pytest.fixture
def bit_learner():
    """Z ~ Bern(0.3), W in {0, 1}, 0-1 loss, two samples, β = 2."""
    return LearnerInstance(
        mu=ProbVec.bernoulli(0.3),
        w_atoms=(0, 1),
        loss=np.array([[0.0, 1.0], [1.0, 0.0]]),
        n=2,
        beta=2.0
    )


@pytest.fixture
def bounded_sg():
    """Loss in [0, 1]: every sub-Gaussian parameter is 1/2."""
    return SubGaussianParams.from_loss_range(0.0, 1.0)


@pytest.fixture
def log2():
    return math.log(2.0)
