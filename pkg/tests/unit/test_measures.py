"""Tests for divergences, information measures and the decomposition identities."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from src.core import measures
from src.core.measures import decomposition_residual
from src.exceptions import AlphabetError, ValidationError
from src.models.distributions import JointDist, ProbVec
from src.models.kinds import InfoKind


def joints_2x2():
    cells = st.lists(st.floats(min_value=1e-3, max_value=1.0), min_size=4, max_size=4)
    return cells.map(lambda c: JointDist.from_matrix(np.reshape(c, (2, 2)), normalize=True))


alphas = st.floats(min_value=0.05, max_value=0.95)


@pytest.mark.unit
class TestDivergences:
    """Pairwise divergences on ProbVec."""

    def test_kl_of_identical_is_zero(self, bern_quarter):
        assert measures.kl(bern_quarter, bern_quarter) == 0.0

    def test_kl_hand_value(self, bern_half, bern_quarter):
        expected = 0.5 * math.log(2.0) + 0.5 * math.log(2.0 / 3.0)
        assert measures.kl(bern_half, bern_quarter) == pytest.approx(expected, abs=1e-12)
        assert expected == pytest.approx(0.14384, abs=1e-5)

    def test_kl_disjoint_support_is_infinite(self):
        assert measures.kl(ProbVec.bernoulli(0.0), ProbVec.bernoulli(1.0)) == math.inf

    def test_kl_mismatched_alphabets(self):
        with pytest.raises(AlphabetError):
            measures.kl(ProbVec.bernoulli(0.5), ProbVec.uniform(("a", "b")))

    def test_renyi_of_identical_is_zero(self, bern_quarter):
        assert measures.renyi_div(bern_quarter, bern_quarter, 0.3) == pytest.approx(0.0, abs=1e-15)

    def test_renyi_half_is_twice_bhattacharyya(self, bern_half, bern_quarter):
        expected = -2.0 * math.log(math.sqrt(0.25 * 0.5) + math.sqrt(0.75 * 0.5))
        value = measures.renyi_div(bern_half, bern_quarter, 0.5)
        assert value == pytest.approx(expected, abs=1e-12)
        assert measures.bhattacharyya(bern_half, bern_quarter) == pytest.approx(value / 2.0, abs=1e-12)

    def test_renyi_single_surviving_atom(self, bern_half):
        point = ProbVec.point_mass(0, (0, 1))
        assert measures.renyi_div(point, bern_half, 0.5) == pytest.approx(math.log(2.0), abs=1e-12)

    def test_renyi_disjoint_support_is_infinite(self):
        assert measures.renyi_div(ProbVec.bernoulli(0.0), ProbVec.bernoulli(1.0), 0.5) == math.inf

    def test_renyi_rejects_endpoint_alpha(self, bern_half):
        with pytest.raises(ValidationError):
            measures.renyi_div(bern_half, bern_half, 1.0)

    def test_js_of_identical_is_zero(self, bern_quarter):
        assert measures.js_div(bern_quarter, bern_quarter, 0.4) == pytest.approx(0.0, abs=1e-15)

    @pytest.mark.parametrize("alpha", [0.1, 0.25, 0.5, 0.9])
    def test_js_disjoint_support_saturates(self, alpha):
        value = measures.js_div(ProbVec.bernoulli(1.0), ProbVec.bernoulli(0.0), alpha)
        assert value == pytest.approx(measures.binary_entropy(alpha), abs=1e-12)

    def test_js_matches_direct_summation(self, bern_half, bern_quarter):
        p, q = bern_half.mass, bern_quarter.mass
        mix = 0.5 * q + 0.5 * p
        direct = 0.5 * np.sum(q * np.log(q / mix)) + 0.5 * np.sum(p * np.log(p / mix))
        assert measures.js_div(bern_half, bern_quarter, 0.5) == pytest.approx(direct, abs=1e-12)

    def test_binary_entropy(self):
        assert measures.binary_entropy(0.5) == pytest.approx(math.log(2.0))
        assert measures.binary_entropy(0.0) == 0.0


@pytest.mark.unit
class TestInformationMeasures:
    """info_measure and the Sibson closed form."""

    @pytest.mark.parametrize("label", ["mi", "lautum", "js(0.3)", "renyi(0.7)", "sibson(0.5)"])
    def test_independent_joint_has_zero_information(self, product_joint, label):
        assert measures.info_measure(product_joint, label) == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("alpha", [0.2, 0.5, 0.8])
    def test_renyi_of_diagonal(self, diagonal_joint, alpha, log2):
        value = measures.info_measure(diagonal_joint, InfoKind.renyi(alpha))
        assert value == pytest.approx(alpha / (1.0 - alpha) * log2, rel=1e-12)

    def test_mutual_information_of_diagonal(self, diagonal_joint, log2):
        assert measures.info_measure(diagonal_joint, InfoKind.mi()) == pytest.approx(log2)

    def test_lautum_of_diagonal_is_infinite(self, diagonal_joint):
        assert measures.lautum_information(diagonal_joint) == math.inf

    def test_js_and_renyi_finite_without_absolute_continuity(self, diagonal_joint):
        assert math.isfinite(measures.info_measure(diagonal_joint, "js(0.5)"))
        assert math.isfinite(measures.info_measure(diagonal_joint, "renyi(0.5)"))

    def test_renyi_limits(self, correlated_joint):
        mi = measures.mutual_information(correlated_joint)
        lautum = measures.lautum_information(correlated_joint)
        near_one = measures.info_measure(correlated_joint, InfoKind.renyi(1.0 - 1e-6))
        near_zero = measures.info_measure(correlated_joint, InfoKind.renyi(1e-6))
        assert near_one == pytest.approx(lautum, rel=1e-4)
        assert near_zero / 1e-6 == pytest.approx(mi, rel=1e-4)

    @pytest.mark.parametrize("alpha", [0.25, 0.5, 0.75])
    def test_sibson_closed_form_matches_minimization(self, correlated_joint, alpha):
        closed = measures.sibson_information(correlated_joint, alpha)
        searched, q = measures.sibson_by_minimization(correlated_joint, alpha)
        assert searched == pytest.approx(closed, abs=1e-6)
        assert q.mass == pytest.approx([0.5, 0.5], abs=1e-3)

    def test_sibson_minimization_on_three_atoms(self, rng):
        from src.core.oracle import random_joint
        joint = random_joint(rng, 3, 3)
        closed = measures.sibson_information(joint, 0.4)
        searched, _ = measures.sibson_by_minimization(joint, 0.4)
        assert searched == pytest.approx(closed, abs=1e-6)

    def test_unknown_kind_rejected(self, correlated_joint):
        with pytest.raises(ValidationError):
            measures.info_measure(correlated_joint, "entropy")


@pytest.mark.unit
class TestDecompositions:
    """Mixture and geometric-mean decompositions."""

    def setup_method(self):
        self.joint = JointDist.from_matrix([[0.3, 0.1, 0.05], [0.05, 0.2, 0.3]])
        self.aux = JointDist.from_matrix([[0.2, 0.2, 0.1], [0.1, 0.2, 0.2]])

    def test_js_identity_with_arbitrary_aux(self):
        lhs, residual = measures.js_mixture_decomposition(self.joint, self.aux, 0.3)
        info = measures.info_measure(self.joint, InfoKind.js(0.3))
        assert decomposition_residual(lhs, info, residual) <= 1e-9

    def test_js_optimal_aux_is_the_mixture(self):
        lhs, residual = measures.js_mixture_decomposition(self.joint, self.joint.alpha_mixture(0.6), 0.6)
        assert residual == pytest.approx(0.0, abs=1e-14)
        assert lhs == pytest.approx(measures.info_measure(self.joint, InfoKind.js(0.6)), abs=1e-12)

    def test_js_with_product_aux_gives_scaled_mi(self):
        lhs, _ = measures.js_mixture_decomposition(self.joint, self.joint.product(), 0.4)
        assert lhs == pytest.approx(0.6 * measures.mutual_information(self.joint), abs=1e-12)

    def test_js_independent_joint(self, product_joint):
        aux = JointDist.from_matrix(np.full(product_joint.shape, 1.0 / 6.0))
        lhs, residual = measures.js_mixture_decomposition(product_joint, aux, 0.5)
        assert lhs == pytest.approx(measures.kl(product_joint.product(), aux), abs=1e-12)
        assert residual == pytest.approx(lhs, abs=1e-12)

    def test_renyi_identity_with_arbitrary_aux(self):
        lhs, residual = measures.renyi_geometric_decomposition(self.joint, self.aux, 0.7)
        info = 0.3 * measures.info_measure(self.joint, InfoKind.renyi(0.7))
        assert decomposition_residual(lhs, info, residual) <= 1e-9

    def test_renyi_optimal_aux_is_geometric_mean(self):
        aux = self.joint.geometric_mixture(0.5)
        _, residual = measures.renyi_geometric_decomposition(self.joint, aux, 0.5)
        assert residual == pytest.approx(0.0, abs=1e-14)

    def test_renyi_with_joint_aux_gives_scaled_mi(self):
        lhs, _ = measures.renyi_geometric_decomposition(self.joint, self.joint, 0.35)
        assert lhs == pytest.approx(0.35 * measures.mutual_information(self.joint), abs=1e-12)

    def test_infinite_sides_count_as_equal(self):
        assert decomposition_residual(math.inf, 1.0, math.inf) == 0.0
        assert decomposition_residual(math.inf, 1.0, 2.0) == math.inf


@pytest.mark.unit
class TestMeasureInequalities:
    """Property checks over random 2x2 joints."""

    @given(joint=joints_2x2(), alpha=alphas)
    @settings(max_examples=200, deadline=None)
    def test_js_bounded_by_entropy_and_mi(self, joint, alpha):
        js = measures.info_measure(joint, InfoKind.js(alpha))
        assert js <= measures.binary_entropy(alpha) + 1e-12
        assert js <= (1.0 - alpha) * measures.mutual_information(joint) + 1e-12

    @given(joint=joints_2x2(), alpha=alphas)
    @settings(max_examples=200, deadline=None)
    def test_renyi_bounded_by_mi_and_lautum(self, joint, alpha):
        renyi = measures.info_measure(joint, InfoKind.renyi(alpha))
        mi = measures.mutual_information(joint)
        assert renyi <= alpha / (1.0 - alpha) * mi + 1e-12 * (1.0 + mi)
        assert renyi <= measures.lautum_information(joint) + 1e-12

    @given(joint=joints_2x2(), alpha=alphas)
    @settings(max_examples=100, deadline=None)
    def test_sibson_below_renyi(self, joint, alpha):
        assert (measures.info_measure(joint, InfoKind.sibson(alpha))
                <= measures.info_measure(joint, InfoKind.renyi(alpha)) + 1e-12)

    @given(joint=joints_2x2(), low=alphas, high=alphas)
    @settings(max_examples=100, deadline=None)
    def test_renyi_monotone_in_alpha(self, joint, low, high):
        low, high = sorted((low, high))
        assert (measures.info_measure(joint, InfoKind.renyi(low))
                <= measures.info_measure(joint, InfoKind.renyi(high)) + 1e-12)
