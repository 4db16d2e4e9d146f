"""
Auxiliary distribution method: inverse Legendre duals of CGF envelopes and
the generalization-error bounds built from them.
"""

import math
from typing import List, Sequence, Tuple, Union

import numpy as np
from scipy.optimize import minimize_scalar

from ..exceptions import ParameterError, PreconditionError, ValidationError
from ..models.distributions import AlphaLike, as_alpha
from ..models.envelope import CgfEnvelope, SubGaussianParams
from ..models.kinds import InfoKind, Measure
from ..models.report import BoundReport, TightnessResult
from .measures import binary_entropy

INF = math.inf
LOWER_LAMBDA = 1e-8
UNBOUNDED_LAMBDA = 1e8
GRID_POINTS = 64
GOLDEN_TOLERANCE = 1e-10

KindLike = Union[InfoKind, str]


def sub_gaussian_envelope(sigma: float) -> CgfEnvelope:
    return CgfEnvelope.sub_gaussian(sigma)


def sub_gamma_envelope(variance: float, scale: float) -> CgfEnvelope:
    return CgfEnvelope.sub_gamma(variance, scale)


def sub_exponential_envelope(nu: float, scale: float) -> CgfEnvelope:
    return CgfEnvelope.sub_exponential(nu, scale)


def inverse_legendre_dual(env: CgfEnvelope, y: float,
                          grid_points: int = GRID_POINTS,
                          tolerance: float = GOLDEN_TOLERANCE) -> float:
    """
    ψ⋆⁻¹(y) = inf over λ in (0, b) of (y + ψ(λ))/λ.

    A log-spaced grid scan over [1e-8, b·(1 − 1e-9)] localizes the minimum,
    then golden-section search in log λ refines it.
    """
    if grid_points < 3 or not tolerance > 0:
        raise ValidationError(
            f"need at least 3 grid points and a positive tolerance, got {grid_points}, {tolerance}"
        )
    y = float(y)
    if math.isnan(y) or y < 0:
        raise ValidationError(f"inverse Legendre dual needs y >= 0, got {y!r}")
    if math.isinf(y):
        return INF
    if y == 0.0:
        return 0.0

    upper = env.domain_upper * (1.0 - 1e-9) if math.isfinite(env.domain_upper) else UNBOUNDED_LAMBDA
    upper = max(upper, LOWER_LAMBDA * 10)

    def ratio(log_lam: float) -> float:
        lam = math.exp(log_lam)
        try:
            value = (y + env(lam)) / lam
        except (OverflowError, ZeroDivisionError):
            return INF
        return value if math.isfinite(value) else INF

    grid = np.linspace(math.log(LOWER_LAMBDA), math.log(upper), grid_points)
    values = np.array([ratio(x) for x in grid])
    best = int(np.argmin(values))
    best_value = float(values[best])

    lo = grid[max(best - 1, 0)]
    hi = grid[min(best + 1, grid_points - 1)]
    try:
        if not 0 < best < grid_points - 1:
            raise ValueError("minimum on the bracket edge")
        result = minimize_scalar(ratio, bracket=(lo, grid[best], hi), method="golden", tol=tolerance)
    except ValueError:
        # ties or an edge minimum leave no strict bracket
        result = minimize_scalar(ratio, bounds=(lo, hi), method="bounded",
                                 options={'xatol': tolerance})
    return float(min(best_value, result.fun))


def adm_general_bound(a_values: Sequence[float], b_values: Sequence[float],
                      env_plus: CgfEnvelope, env_minus: CgfEnvelope,
                      grid_points: int = GRID_POINTS,
                      tolerance: float = GOLDEN_TOLERANCE) -> Tuple[float, float]:
    """
    Two-sided bound from an auxiliary joint.

    With A_i = KL(P_W⊗μ‖aux_i), B_i = KL(P_{W,Z_i}‖aux_i) and envelopes under
    the auxiliaries this returns (bound on gen, bound on −gen). Feeding
    A_i = KL(aux_i‖P_W⊗μ) and B_i = KL(aux_i‖P_{W,Z_i}) with envelopes under
    the product and the joint evaluates the reverse form instead.
    """
    if len(a_values) != len(b_values) or len(a_values) == 0:
        raise ValidationError("A and B must be nonempty and of equal length")
    if any(v < 0 for v in list(a_values) + list(b_values)):
        raise ValidationError("KL inputs must be nonnegative")

    def duals(values: Sequence[float], env: CgfEnvelope) -> List[float]:
        return [inverse_legendre_dual(env, v, grid_points, tolerance) for v in values]

    plus_a, minus_a = duals(a_values, env_plus), duals(a_values, env_minus)
    plus_b, minus_b = duals(b_values, env_plus), duals(b_values, env_minus)
    n = len(a_values)
    upper = sum(pa + mb for pa, mb in zip(plus_a, minus_b)) / n
    lower = sum(ma + pb for ma, pb in zip(minus_a, plus_b)) / n
    return upper, lower


def _mean_sqrt(info: Sequence[float], factor: float) -> float:
    if any(math.isinf(v) for v in info):
        return INF
    return sum(math.sqrt(max(factor * v, 0.0)) for v in info) / len(info)


def _check_info(info: Sequence[float], bound_name: str) -> List[float]:
    values = [float(v) for v in info]
    if not values:
        raise ValidationError(f"{bound_name} needs at least one information value")
    if any(math.isnan(v) or v < 0 for v in values):
        raise ValidationError(f"{bound_name} needs nonnegative information values")
    return values


def _as_kind(kind: KindLike) -> InfoKind:
    return InfoKind.parse(kind) if isinstance(kind, str) else kind


def gen_bound(info: Sequence[float], kind: KindLike, sg: SubGaussianParams) -> BoundReport:
    """
    Expected generalization-error bound from per-sample information values.

    MI uses σ, Lautum uses γ, JS(α) uses σ_(α), Rényi(α) and Sibson(α) use
    the pair (σ, γ), and Pinsker-Rényi uses the loss magnitude b. For Sibson
    with a loss range [a, b] both parameters are b − a, the range of the
    per-sample centered loss the bound is stated for.
    """
    kind = _as_kind(kind)
    name = kind.label()
    info = _check_info(info, name)
    params = {'kind': name, 'n': len(info), 'info': list(info)}
    measure = kind.measure

    if measure is Measure.MI:
        sigma = sg.require('sigma', name)
        value = _mean_sqrt(info, 2.0 * sigma ** 2)
        params['sigma'] = sigma
    elif measure is Measure.LAUTUM:
        gamma = sg.require('gamma', name)
        value = _mean_sqrt(info, 2.0 * gamma ** 2)
        params['gamma'] = gamma
    elif measure is Measure.JS:
        a = kind.alpha_value
        sigma_alpha = sg.require('sigma_alpha', name)
        value = _mean_sqrt(info, 2.0 * sigma_alpha ** 2 / (a * (1.0 - a)))
        params.update(alpha=a, sigma_alpha=sigma_alpha)
    elif measure in (Measure.RENYI, Measure.SIBSON):
        a = kind.alpha_value
        if measure is Measure.SIBSON and sg.loss_range is not None:
            sigma = gamma = sg.loss_range[1] - sg.loss_range[0]
        else:
            sigma, gamma = sg.require('sigma', name), sg.require('gamma', name)
        variance = a * gamma ** 2 + (1.0 - a) * sigma ** 2
        value = _mean_sqrt(info, 2.0 * variance / a)
        params.update(alpha=a, sigma=sigma, gamma=gamma)
    elif measure is Measure.PINSKER_RENYI:
        a = kind.alpha_value
        sg.require_range(name)
        b = sg.loss_magnitude
        value = _mean_sqrt(info, 2.0 * b ** 2 / a)
        params.update(alpha=a, b=b)
    else:
        raise ParameterError(f"no bound for kind {name}", bound_name=name)

    return BoundReport(name, value, params)


def direct_auxiliary_bound(product_divs: Sequence[float], joint_divs: Sequence[float],
                           sigma_hat: float, alpha: AlphaLike) -> BoundReport:
    """
    Averaged direct bound for arbitrary auxiliaries:
    (1/n)Σ √(2σ̂²(α·KL(P_W⊗μ‖aux) + (1−α)·KL(P_{W,Z_i}‖aux))/(α(1−α))).
    """
    a = as_alpha(alpha).value
    combined = [a * p + (1.0 - a) * j for p, j in zip(product_divs, joint_divs)]
    combined = _check_info(combined, "direct_auxiliary")
    value = _mean_sqrt(combined, 2.0 * sigma_hat ** 2 / (a * (1.0 - a)))
    return BoundReport("direct_auxiliary", value,
                       {'alpha': a, 'sigma_hat': sigma_hat, 'n': len(combined)})


def reverse_auxiliary_bound(product_divs: Sequence[float], joint_divs: Sequence[float],
                            sg: SubGaussianParams, alpha: AlphaLike) -> BoundReport:
    """
    Reverse averaged bound for arbitrary auxiliaries, with
    C_i = KL(aux‖P_W⊗μ) and D_i = KL(aux‖P_{W,Z_i}).
    """
    a = as_alpha(alpha).value
    sigma, gamma = sg.require('sigma', "reverse_auxiliary"), sg.require('gamma', "reverse_auxiliary")
    combined = [a * c + (1.0 - a) * d for c, d in zip(product_divs, joint_divs)]
    combined = _check_info(combined, "reverse_auxiliary")
    variance = a * gamma ** 2 + (1.0 - a) * sigma ** 2
    value = _mean_sqrt(combined, 2.0 * variance / (a * (1.0 - a)))
    return BoundReport("reverse_auxiliary", value,
                       {'alpha': a, 'sigma': sigma, 'gamma': gamma, 'n': len(combined)})


def bhattacharyya_bound(distances: Sequence[float], sg: SubGaussianParams) -> BoundReport:
    """(2/n)Σ √((σ² + γ²)·D_B)."""
    sigma, gamma = sg.require('sigma', "bhattacharyya"), sg.require('gamma', "bhattacharyya")
    distances = _check_info(distances, "bhattacharyya")
    value = 2.0 * _mean_sqrt(distances, sigma ** 2 + gamma ** 2)
    return BoundReport("bhattacharyya", value, {'sigma': sigma, 'gamma': gamma, 'n': len(distances)})


def js_constant_bound(sg: SubGaussianParams, alpha: AlphaLike) -> BoundReport:
    """Data-free bound σ_(α)·√(2h(α)/(α(1−α))), smallest at α = 1/2."""
    a = as_alpha(alpha).value
    sigma_alpha = sg.require('sigma_alpha', "js_constant")
    value = sigma_alpha * math.sqrt(2.0 * binary_entropy(a) / (a * (1.0 - a)))
    return BoundReport("js_constant", value, {'alpha': a, 'sigma_alpha': sigma_alpha})


def total_variation_constant(sg: SubGaussianParams) -> BoundReport:
    """The 2(b − a) constant of the total-variation route."""
    low, high = sg.require_range("total_variation")
    return BoundReport("total_variation", 2.0 * (high - low), {'loss_range': [low, high]})


def tightness_comparison(alpha_js: AlphaLike, alpha_renyi: AlphaLike,
                         renyi_info: Sequence[float], sg: SubGaussianParams) -> TightnessResult:
    """
    Per-sample check of α·h(α')/((1−α')α') ≤ I_R^α, under which the JS(α')
    bound is below the Rényi(α) bound.
    """
    a_js = as_alpha(alpha_js).value
    a_r = as_alpha(alpha_renyi).value
    sigmas = [sg.require(name, "tightness") for name in ('sigma_alpha', 'sigma', 'gamma')]
    if max(sigmas) - min(sigmas) > 1e-12:
        raise PreconditionError(
            f"comparison needs sigma_alpha = sigma = gamma, got {sigmas}", operation="tightness_comparison"
        )
    threshold = a_r * binary_entropy(a_js) / ((1.0 - a_js) * a_js)
    holds = [float(v) >= threshold and float(v) > 0 for v in renyi_info]
    return TightnessResult(holds, threshold, a_js, a_r)


def mismatch_bound(train_test_div: float, info: Sequence[float], kind: KindLike,
                   sg: SubGaussianParams) -> BoundReport:
    """
    In-distribution bound plus the train/test divergence term.

    ``train_test_div`` is js_div(μ', μ, α) for JS kinds and
    renyi_div(μ', μ, α) for Rényi kinds.
    """
    kind = _as_kind(kind)
    if train_test_div < 0 or math.isnan(train_test_div):
        raise ValidationError("train/test divergence must be nonnegative")
    base = gen_bound(info, kind, sg)
    a = kind.alpha_value if kind.alpha is not None else None

    if kind.measure is Measure.JS:
        sigma_alpha = sg.require('sigma_alpha', kind.label())
        extra = math.sqrt(2.0 * sigma_alpha ** 2 * train_test_div / (a * (1.0 - a))) \
            if math.isfinite(train_test_div) else INF
    elif kind.measure is Measure.RENYI:
        sigma, gamma = base.params['sigma'], base.params['gamma']
        variance = a * gamma ** 2 + (1.0 - a) * sigma ** 2
        extra = math.sqrt(2.0 * variance * train_test_div / a) if math.isfinite(train_test_div) else INF
    else:
        raise ParameterError(f"mismatch bound supports JS and Renyi kinds, got {kind}",
                             bound_name=kind.label())

    params = dict(base.params)
    params.update(train_test_div=train_test_div, mismatch_term=extra, matched_bound=base.value)
    return BoundReport(f"mismatch_{kind.label()}", base.value + extra, params)
