"""Tests for the brute-force oracles and seeded generators."""

import math

import numpy as np
import pytest

from src.core import adm, erm, measures, oracle
from src.exceptions import DomainError, EnumerationSizeError, ValidationError
from src.models.distributions import ProbVec
from src.models.envelope import SubGaussianParams
from src.models.kinds import InfoKind
from src.models.learner import LearnerInstance, LearningKernel


def identity_learner() -> LearnerInstance:
    """n = 1, Z ~ Bern(1/2), 0-1 loss."""
    return LearnerInstance(
        mu=ProbVec.bernoulli(0.5),
        w_atoms=(0, 1),
        loss=np.array([[0.0, 1.0], [1.0, 0.0]]),
        n=1,
        beta=1.0
    )


@pytest.mark.unit
class TestEnumerateLearner:
    """Exact per-sample joints and generalization error."""

    def test_identity_learner(self, log2):
        instance = identity_learner()
        kernel = LearningKernel(instance.w_atoms, np.eye(2), label="identity")
        learner = oracle.enumerate_learner(instance, kernel)
        assert learner.exact_gen == pytest.approx(0.5)
        assert learner.per_sample_joints[0].mass == pytest.approx(np.diag([0.5, 0.5]))

        mi = measures.mutual_information(learner.per_sample_joints[0])
        bound = adm.gen_bound([mi], "mi", SubGaussianParams.from_loss_range(0.0, 1.0)).value
        assert bound == pytest.approx(math.sqrt(2 * 0.25 * log2))
        assert bound >= learner.exact_gen

    def test_data_independent_kernel(self, bit_learner):
        kernel = LearningKernel.constant(bit_learner, ProbVec.from_masses([0.3, 0.7]))
        learner = oracle.enumerate_learner(bit_learner, kernel)
        assert learner.exact_gen == pytest.approx(0.0, abs=1e-15)
        assert all(j.is_independent() for j in learner.per_sample_joints)

    def test_routes_agree(self):
        for index in range(10):
            instance, kernel = oracle.fuzz_instance(5, index)
            learner = oracle.enumerate_learner(instance, kernel)
            assert learner.route_gap <= 1e-12

    def test_kernel_shape_mismatch(self, bit_learner):
        kernel = LearningKernel(bit_learner.w_atoms, np.full((3, 2), 0.5))
        with pytest.raises(ValidationError):
            oracle.enumerate_learner(bit_learner, kernel)

    def test_enumeration_limit(self, bit_learner):
        big = bit_learner.with_n(30)
        with pytest.raises(EnumerationSizeError):
            oracle.enumerate_learner(big, LearningKernel.constant(bit_learner, bit_learner.prior), limit=1000)


@pytest.mark.unit
class TestExchangeable:
    """Type enumeration for permutation-invariant kernels."""

    def test_matches_full_enumeration(self, bit_learner):
        instance = bit_learner.with_n(4)
        summary = oracle.exchangeable_sample_joints(instance, oracle.gibbs_by_counts(instance))
        learner = oracle.enumerate_learner(instance, erm.gibbs_kernel(instance))
        assert summary.type_count == 5
        assert summary.exact_gen == pytest.approx(learner.exact_gen, abs=1e-12)
        for joint in learner.per_sample_joints:
            assert summary.joint.mass == pytest.approx(joint.mass, abs=1e-12)

    def test_type_limit(self, bit_learner):
        with pytest.raises(ValidationError):
            oracle.exchangeable_sample_joints(bit_learner.with_n(50), oracle.gibbs_by_counts(bit_learner),
                                              limit=10)


@pytest.mark.unit
class TestFiniteDifferences:
    """Gradient checker."""

    def test_linear_objective(self):
        c = np.array([0.3, -1.0, 2.0])
        deviation = oracle.finite_diff_grad_check(lambda x: float(c @ x), lambda x: c,
                                                  np.array([0.2, 0.3, 0.5]))
        assert deviation <= 1e-10

    def test_kl_gradient(self, rng):
        q = rng.dirichlet(np.ones(5))
        p = rng.dirichlet(np.ones(5) * 4.0)
        deviation = oracle.finite_diff_grad_check(
            lambda x: float(np.sum(x * np.log(x / q))),
            lambda x: np.log(x / q) + 1.0,
            p
        )
        assert deviation <= 1e-5

    def test_point_near_boundary(self):
        with pytest.raises(DomainError):
            oracle.finite_diff_grad_check(lambda x: 0.0, lambda x: np.zeros(2), np.array([1e-7, 1.0]))

    def test_step_out_of_range(self):
        with pytest.raises(ValidationError):
            oracle.finite_diff_grad_check(lambda x: 0.0, lambda x: np.zeros(2), np.array([0.5, 0.5]), step=1e-2)


@pytest.mark.unit
class TestGenerators:
    """Seeded random instances."""

    def test_fuzz_instance_reproducible(self):
        first, kernel_a = oracle.fuzz_instance(11, 3)
        second, kernel_b = oracle.fuzz_instance(11, 3)
        assert np.array_equal(first.loss, second.loss)
        assert np.array_equal(kernel_a.table, kernel_b.table)

    def test_fuzz_instance_ranges(self):
        for index in range(20):
            instance, kernel = oracle.fuzz_instance(0, index)
            assert 2 <= instance.n_w <= 4 and 2 <= instance.n_z <= 4
            assert 1 <= instance.n <= 3
            assert instance.loss.min() >= 0 and instance.loss.max() <= 1
            assert 0.5 <= instance.beta <= 5.0
            assert kernel.table.shape == (instance.dataset_count, instance.n_w)

    def test_random_distribution_with_zeros(self, rng):
        mass = oracle.random_distribution(rng, 50, zero_probability=0.5)
        assert mass.sum() == pytest.approx(1.0)
        assert (mass == 0).any()

    def test_random_joint_is_valid(self, rng):
        joint = oracle.random_joint(rng, 3, 4, zero_probability=0.2)
        assert joint.shape == (3, 4)
        assert joint.mass.sum() == pytest.approx(1.0)

    def test_random_kernel_rows(self, rng, bit_learner):
        kernel = oracle.random_kernel(rng, bit_learner, deterministic_probability=1.0)
        assert kernel.table.shape == (4, 2)
        assert set(kernel.table.ravel().tolist()) <= {0.0, 1.0}
        assert kernel.table.sum(axis=1) == pytest.approx(np.ones(4))

    def test_sibson_oracle_grid(self, correlated_joint):
        value, _ = measures.sibson_by_minimization(correlated_joint, 0.5, step=1e-2)
        assert value == pytest.approx(measures.info_measure(correlated_joint, InfoKind.sibson(0.5)), abs=1e-6)
