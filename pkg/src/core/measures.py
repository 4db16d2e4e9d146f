"""
Divergences and information measures on finite distributions.

Argument order: ``renyi_div(P1, P, a)`` and ``js_div(P1, P, a)`` give the
first argument exponent (resp. weight) 1 − a:

    renyi_div(P1, P, a) = log Σ P^a · P1^(1−a) / (a − 1)
    js_div(P1, P, a)    = a·KL(P‖M) + (1 − a)·KL(P1‖M),  M = a·P + (1 − a)·P1

Information measures compare the joint (first) with the product of its
marginals (second). Infinite values are returned as ``math.inf``.
"""

import math
from typing import Tuple, Union

import numpy as np

from ..exceptions import ValidationError
from ..models.distributions import (
    AlphaLike, Distribution, JointDist, ProbVec, as_alpha, check_same_alphabet
)
from ..models.kinds import InfoKind, Measure
from ..utils.numerics import INF, stable_sum
from ..utils.simplex import grid_minimize, refine_on_simplex

KindLike = Union[InfoKind, str]


def _kl(p: np.ndarray, q: np.ndarray) -> float:
    support = p > 0
    if np.any(q[support] <= 0):
        return INF
    ps, qs = p[support], q[support]
    return max(0.0, stable_sum(ps * (np.log(ps) - np.log(qs))))


def _renyi(p1: np.ndarray, p: np.ndarray, a: float) -> float:
    both = (p1 > 0) & (p > 0)
    if not both.any():
        return INF
    log_terms = a * np.log(p[both]) + (1.0 - a) * np.log(p1[both])
    total = stable_sum(np.exp(log_terms))
    if total <= 0:
        return INF
    return max(0.0, math.log(total) / (a - 1.0))


def _js(p1: np.ndarray, p: np.ndarray, a: float) -> float:
    mix = a * p + (1.0 - a) * p1
    return a * _kl(p, mix) + (1.0 - a) * _kl(p1, mix)


def _masses(left: Distribution, right: Distribution) -> Tuple[np.ndarray, np.ndarray]:
    check_same_alphabet(left, right)
    return left.mass.ravel(), right.mass.ravel()


def binary_entropy(alpha: AlphaLike) -> float:
    """h(α) = −α log α − (1−α) log(1−α), in nats."""
    a = float(alpha)
    if a <= 0.0 or a >= 1.0:
        return 0.0
    return -a * math.log(a) - (1.0 - a) * math.log1p(-a)


def kl(p: Distribution, q: Distribution) -> float:
    """KL(p‖q); +inf when p is not absolutely continuous w.r.t. q."""
    return _kl(*_masses(p, q))


def renyi_div(p: Distribution, q: Distribution, alpha: AlphaLike) -> float:
    """R_α with the first argument carrying exponent 1 − α; +inf on disjoint supports."""
    a = as_alpha(alpha).value
    return _renyi(*_masses(p, q), a)


def js_div(p: Distribution, q: Distribution, alpha: AlphaLike) -> float:
    """α-Jensen-Shannon divergence; always finite and at most h(α)."""
    a = as_alpha(alpha).value
    return _js(*_masses(p, q), a)


def bhattacharyya(p: Distribution, q: Distribution) -> float:
    """Bhattacharyya distance −log Σ √(p q), equal to R_{1/2}/2."""
    pm, qm = _masses(p, q)
    coefficient = stable_sum(np.sqrt(pm * qm))
    return INF if coefficient <= 0 else max(0.0, -math.log(coefficient))


def mutual_information(joint: JointDist) -> float:
    return kl(joint, joint.product())


def lautum_information(joint: JointDist) -> float:
    return kl(joint.product(), joint)


def sibson_information(joint: JointDist, alpha: AlphaLike) -> float:
    """
    min over Q_Z of R_α(P_{W,Z} ‖ P_W ⊗ Q_Z), in closed form.

    With the first argument carrying exponent 1 − α the minimizer is
    Q_Z ∝ A_z^(1/(1−α)), A_z = Σ_w P_W(w)·P(z|w)^(1−α), giving
    −log Σ_z A_z^(1/(1−α)).
    """
    a = as_alpha(alpha).value
    p_w = joint.mass.sum(axis=1)
    cond = joint.conditional_z_given_w()
    rows = p_w > 0
    column_norms = (p_w[rows, None] * np.power(cond[rows], 1.0 - a)).sum(axis=0)
    total = stable_sum(np.power(column_norms, 1.0 / (1.0 - a)))
    return max(0.0, -math.log(total))


def _sibson_objective(joint: JointDist, a: float):
    p_w = joint.mass.sum(axis=1)
    column_norms = (p_w[:, None] * np.power(joint.conditional_z_given_w(), 1.0 - a)).sum(axis=0)

    def batch(q: np.ndarray) -> np.ndarray:
        with np.errstate(divide='ignore'):
            total = np.power(q, a) @ column_norms
            return np.where(total > 0, np.log(total) / (a - 1.0), np.inf)

    def single(q: np.ndarray) -> float:
        return float(batch(np.asarray(q)[None, :])[0])

    return batch, single


def sibson_by_minimization(joint: JointDist, alpha: AlphaLike, step: float = 1e-3) -> Tuple[float, ProbVec]:
    """
    Sibson information by direct minimization over Q_Z.

    Grid scan on the simplex (up to three sample atoms) followed by
    Nelder-Mead refinement; larger alphabets start from P_Z. Returns the
    minimum value and the minimizing Q_Z.
    """
    a = as_alpha(alpha).value
    batch, single = _sibson_objective(joint, a)
    dim = joint.shape[1]
    if dim <= 3:
        point, value = grid_minimize(batch, single, dim, step)
    else:
        point, value = refine_on_simplex(single, joint.mass.sum(axis=0))
    return max(0.0, value), ProbVec(joint.z_atoms, point / point.sum())


def _as_kind(kind: KindLike) -> InfoKind:
    return InfoKind.parse(kind) if isinstance(kind, str) else kind


def info_measure(joint: JointDist, kind: KindLike) -> float:
    """Information between the two coordinates of ``joint``; 0 iff independent."""
    kind = _as_kind(kind)
    product = joint.product()
    measure = kind.measure

    if measure is Measure.MI:
        return kl(joint, product)
    if measure is Measure.LAUTUM:
        return kl(product, joint)
    if measure is Measure.JS:
        return js_div(joint, product, kind.alpha)
    if measure in (Measure.RENYI, Measure.PINSKER_RENYI):
        return renyi_div(joint, product, kind.alpha)
    if measure is Measure.SIBSON:
        return sibson_information(joint, kind.alpha)
    raise ValidationError(f"unsupported information kind {kind}")


def js_mixture_decomposition(joint: JointDist, aux: JointDist, alpha: AlphaLike) -> Tuple[float, float]:
    """
    α·KL(P_W⊗P_Z‖aux) + (1−α)·KL(P_{W,Z}‖aux) = I_JS^α + KL(mixture‖aux).

    Returns (left-hand side, residual KL to the α-mixture).
    """
    a = as_alpha(alpha).value
    check_same_alphabet(joint, aux)
    product = joint.product()
    lhs = a * kl(product, aux) + (1.0 - a) * kl(joint, aux)
    residual = kl(joint.alpha_mixture(a), aux)
    return lhs, residual


def renyi_geometric_decomposition(joint: JointDist, aux: JointDist,
                                  alpha: AlphaLike) -> Tuple[float, float]:
    """
    α·KL(aux‖P_W⊗P_Z) + (1−α)·KL(aux‖P_{W,Z}) = (1−α)·I_R^α + KL(aux‖G),

    G the normalized geometric mean (P_W⊗P_Z)^α·P_{W,Z}^(1−α).
    Returns (left-hand side, residual).
    """
    a = as_alpha(alpha).value
    check_same_alphabet(joint, aux)
    product = joint.product()
    lhs = a * kl(aux, product) + (1.0 - a) * kl(aux, joint)
    residual = kl(aux, joint.geometric_mixture(a))
    return lhs, residual


def decomposition_residual(lhs: float, information: float, residual: float) -> float:
    """Relative mismatch of ``lhs = information + residual``; 0 when both sides are infinite."""
    rhs = information + residual
    if math.isinf(lhs) or math.isinf(rhs):
        return 0.0 if lhs == rhs else INF
    return abs(lhs - rhs) / max(1.0, abs(lhs))
