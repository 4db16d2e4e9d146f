"""
Gaussian mean estimation with two samples: W = t·Z1 + (1−t)·Z2,
Z ~ N(mean, σ²), loss min((w − z)², c²).

Closed forms for mutual and Rényi information, Monte Carlo or Gauss-Hermite
evaluation of the α-JS information through the mixture entropy, and the
Monte Carlo true generalization error.
"""

import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from numpy.polynomial.hermite_e import hermegauss
from scipy.stats import multivariate_normal

from ..exceptions import NumericalAccuracyError, ValidationError
from ..models.distributions import AlphaLike, as_alpha
from ..models.envelope import SubGaussianParams
from ..models.kinds import InfoKind, Measure
from ..models.toy import ToyConfig, ToyGeometry, ToySweepRow
from ..utils.parallel import parallel_map
from ..utils.rng import stream
from .adm import gen_bound

CHUNK = 1_000_000
MIN_GEN_SAMPLES = 10_000
QUADRATURE_TOLERANCE = 1e-6
HERMITE_NODES = 64

KindLike = Union[InfoKind, str]


@dataclass(frozen=True, eq=False)
class GaussianSampler:
    """Multivariate normal with sampling and log-density."""

    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'mean', np.atleast_1d(np.asarray(self.mean, dtype=float)))
        object.__setattr__(self, 'cov', np.atleast_2d(np.asarray(self.cov, dtype=float)))
        object.__setattr__(self, '_chol', np.linalg.cholesky(self.cov))

    @property
    def dim(self) -> int:
        return self.mean.size

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return self.mean + rng.standard_normal((size, self.dim)) @ self._chol.T

    def logpdf(self, x: np.ndarray) -> np.ndarray:
        return np.atleast_1d(multivariate_normal(self.mean, self.cov).logpdf(x))


def toy_geometry(cfg: ToyConfig) -> ToyGeometry:
    """ρ_i and the covariances of (W, Z_i) and of P_W⊗P_{Z_i}."""
    s2, t = cfg.variance, cfg.t
    spread = t * t + (1.0 - t) * (1.0 - t)
    w_variance = s2 * spread
    cross = [t * s2, (1.0 - t) * s2]
    joints = [np.array([[w_variance, c], [c, s2]]) for c in cross]
    return ToyGeometry(
        rho1=t / math.sqrt(spread),
        rho2=(1.0 - t) / math.sqrt(spread),
        w_variance=w_variance,
        z_variance=s2,
        joint_covariances=joints,
        product_covariance=np.diag([w_variance, s2])
    )


def gaussian_entropy(cov: np.ndarray) -> float:
    """½·log((2πe)^k det Σ)."""
    cov = np.atleast_2d(cov)
    sign, logdet = np.linalg.slogdet(cov)
    if sign <= 0:
        raise ValidationError("covariance must be positive definite")
    k = cov.shape[0]
    return 0.5 * (k * math.log(2.0 * math.pi * math.e) + logdet)


def gaussian_kl(mean_p, cov_p, mean_q, cov_q) -> float:
    """KL(N(mean_p, cov_p) ‖ N(mean_q, cov_q))."""
    mean_p, mean_q = np.atleast_1d(mean_p).astype(float), np.atleast_1d(mean_q).astype(float)
    cov_p, cov_q = np.atleast_2d(cov_p).astype(float), np.atleast_2d(cov_q).astype(float)
    k = mean_p.size
    delta = mean_q - mean_p
    inv_q = np.linalg.inv(cov_q)
    _, logdet_p = np.linalg.slogdet(cov_p)
    _, logdet_q = np.linalg.slogdet(cov_q)
    return 0.5 * (np.trace(inv_q @ cov_p) + delta @ inv_q @ delta - k + logdet_q - logdet_p)


def gaussian_renyi_div(mean_first, cov_first, mean_second, cov_second, alpha: AlphaLike) -> float:
    """
    Rényi divergence between Gaussians, the first argument carrying exponent 1 − α:

        α/2·Δᵀ Σ*⁻¹ Δ + log(det Σ* / (det Σ_second^(1−α) det Σ_first^α)) / (2(1−α)),

    with Σ* = α·Σ_first + (1 − α)·Σ_second.
    """
    a = as_alpha(alpha).value
    mean_first = np.atleast_1d(mean_first).astype(float)
    mean_second = np.atleast_1d(mean_second).astype(float)
    cov_first = np.atleast_2d(cov_first).astype(float)
    cov_second = np.atleast_2d(cov_second).astype(float)

    mixed = a * cov_first + (1.0 - a) * cov_second
    delta = mean_first - mean_second
    _, logdet_mixed = np.linalg.slogdet(mixed)
    _, logdet_first = np.linalg.slogdet(cov_first)
    _, logdet_second = np.linalg.slogdet(cov_second)
    mean_term = 0.5 * a * float(delta @ np.linalg.solve(mixed, delta))
    log_det_term = (logdet_mixed - (1.0 - a) * logdet_second - a * logdet_first) / (2.0 * (1.0 - a))
    return max(0.0, mean_term + log_det_term)


def _mixture_components(cfg: ToyConfig, i: int) -> Tuple[GaussianSampler, GaussianSampler]:
    geometry = toy_geometry(cfg)
    zero = np.zeros(2)
    return (GaussianSampler(zero, geometry.product_covariance),
            GaussianSampler(zero, geometry.joint_covariance(i)))


def _log_mixture(x: np.ndarray, a: float, product: GaussianSampler, joint: GaussianSampler,
                 log_p: Optional[np.ndarray] = None, log_j: Optional[np.ndarray] = None) -> np.ndarray:
    log_p = product.logpdf(x) if log_p is None else log_p
    log_j = joint.logpdf(x) if log_j is None else log_j
    return np.logaddexp(math.log(a) + log_p, math.log1p(-a) + log_j)


def _component_mc(component: GaussianSampler, a: float, product: GaussianSampler,
                  joint: GaussianSampler, rng: np.random.Generator, samples: int) -> Tuple[float, float, float, float]:
    """Chunked sums of −log m and of the control-variate log-ratio under one component."""
    sum_h = sum_h2 = sum_r = sum_r2 = 0.0
    remaining = samples
    while remaining > 0:
        size = min(CHUNK, remaining)
        x = component.sample(rng, size)
        log_p, log_j = product.logpdf(x), joint.logpdf(x)
        log_m = _log_mixture(x, a, product, joint, log_p, log_j)
        own = log_p if component is product else log_j
        neg_log_m = -log_m
        ratio = own - log_m
        sum_h += float(neg_log_m.sum())
        sum_h2 += float((neg_log_m ** 2).sum())
        sum_r += float(ratio.sum())
        sum_r2 += float((ratio ** 2).sum())
        remaining -= size
    return sum_h, sum_h2, sum_r, sum_r2


def _mean_and_variance(total: float, total_sq: float, count: int) -> Tuple[float, float]:
    mean = total / count
    variance = max(total_sq / count - mean * mean, 0.0) * count / max(count - 1, 1)
    return mean, variance


def mixture_entropy_mc(cfg: ToyConfig, i: int) -> Tuple[float, float, float, float]:
    """
    Stratified Monte Carlo over the α-mixture of P_W⊗P_{Z_i} and P_{W,Z_i}.

    Returns (h(mixture), std error, I_JS, std error). The JS estimate uses the
    per-sample log-ratio, i.e. the entropic form with −log p and −log j as
    control variates whose means are the exact Gaussian entropies.
    """
    a = cfg.alpha.value
    product, joint = _mixture_components(cfg, i)
    rng = stream(cfg.seed, "mixture", i, f"{cfg.t:.17g}", f"{a:.17g}")
    n = int(cfg.mc_samples)

    hp, hp2, rp, rp2 = _component_mc(product, a, product, joint, rng, n)
    hj, hj2, rj, rj2 = _component_mc(joint, a, product, joint, rng, n)

    mean_hp, var_hp = _mean_and_variance(hp, hp2, n)
    mean_hj, var_hj = _mean_and_variance(hj, hj2, n)
    mean_rp, var_rp = _mean_and_variance(rp, rp2, n)
    mean_rj, var_rj = _mean_and_variance(rj, rj2, n)

    entropy = a * mean_hp + (1.0 - a) * mean_hj
    entropy_se = math.sqrt((a * a * var_hp + (1.0 - a) ** 2 * var_hj) / n)
    js = a * mean_rp + (1.0 - a) * mean_rj
    js_se = math.sqrt((a * a * var_rp + (1.0 - a) ** 2 * var_rj) / n)
    return entropy, entropy_se, max(js, 0.0), js_se


def _hermite_expectation(component: GaussianSampler, integrand, nodes: int) -> float:
    x, w = hermegauss(nodes)
    w = w / math.sqrt(2.0 * math.pi)
    xi, xj = np.meshgrid(x, x, indexing="ij")
    standard = np.stack([xi.ravel(), xj.ravel()], axis=1)
    weights = np.outer(w, w).ravel()
    points = component.mean + standard @ component._chol.T
    return float(weights @ integrand(points))


def mixture_entropy_quadrature(cfg: ToyConfig, i: int, nodes: int = HERMITE_NODES,
                               tolerance: float = QUADRATURE_TOLERANCE) -> Tuple[float, float]:
    """
    Gauss-Hermite evaluation of h(mixture) and I_JS, each mixture component
    integrated on its own whitened tensor grid.

    The result at ``nodes`` is compared with a coarser rule; a difference above
    ``tolerance`` raises NumericalAccuracyError.
    """
    a = cfg.alpha.value
    product, joint = _mixture_components(cfg, i)

    def evaluate(order: int) -> Tuple[float, float]:
        def neg_log_m(x):
            return -_log_mixture(x, a, product, joint)

        h_p = _hermite_expectation(product, neg_log_m, order)
        h_j = _hermite_expectation(joint, neg_log_m, order)
        entropy = a * h_p + (1.0 - a) * h_j
        js = entropy - a * gaussian_entropy(product.cov) - (1.0 - a) * gaussian_entropy(joint.cov)
        return entropy, max(js, 0.0)

    entropy, js = evaluate(nodes)
    coarse_entropy, _ = evaluate(max(8, (3 * nodes) // 4))
    achieved = abs(entropy - coarse_entropy)
    if achieved > tolerance:
        raise NumericalAccuracyError(
            f"Gauss-Hermite mixture entropy at t={cfg.t:.4g}, i={i} changed by {achieved:.3e} "
            f"between {nodes} and {(3 * nodes) // 4} nodes",
            achieved=achieved, requested=tolerance
        )
    return entropy, js


def toy_js_information(cfg: ToyConfig, i: int, method: str = "mc",
                       nodes: int = HERMITE_NODES, tolerance: float = QUADRATURE_TOLERANCE) -> Tuple[float, float]:
    """I_JS^α(W; Z_i) and its standard error (0 for quadrature)."""
    if method == "mc":
        _, _, js, js_se = mixture_entropy_mc(cfg, i)
        return js, js_se
    if method == "quadrature":
        _, js = mixture_entropy_quadrature(cfg, i, nodes, tolerance)
        return js, 0.0
    raise ValidationError(f"unknown entropy method {method!r}")


def toy_information(cfg: ToyConfig, i: int, kind: KindLike, method: str = "mc") -> float:
    """I(W; Z_i) for MI, JS(α) or Rényi(α); the order comes from ``kind``."""
    if i not in (1, 2):
        raise ValidationError(f"sample index must be 1 or 2, got {i}")
    kind = InfoKind.parse(kind) if isinstance(kind, str) else kind
    geometry = toy_geometry(cfg)

    if kind.measure is Measure.MI:
        return -0.5 * math.log1p(-geometry.rho(i) ** 2)
    if kind.measure is Measure.RENYI:
        zero = np.zeros(2)
        return gaussian_renyi_div(zero, geometry.joint_covariance(i),
                                  zero, geometry.product_covariance, kind.alpha)
    if kind.measure is Measure.JS:
        value, _ = toy_js_information(cfg.with_alpha(kind.alpha), i, method)
        return value
    raise ValidationError(f"case study supports mi, js and renyi, got {kind}")


def toy_true_gen_error(cfg: ToyConfig) -> Tuple[float, float]:
    """
    Monte Carlo E[ℓ(W, Z')] − E[(ℓ(W, Z1) + ℓ(W, Z2))/2] with common random
    numbers: every draw of (Z1, Z2, Z') contributes one paired difference.
    """
    if cfg.mc_samples < MIN_GEN_SAMPLES:
        raise ValidationError(f"true generalization error needs at least {MIN_GEN_SAMPLES} samples")
    rng = stream(cfg.seed, "true_gen", f"{cfg.t:.17g}")
    c2 = cfg.c * cfg.c
    total = total_sq = 0.0
    remaining = n = int(cfg.mc_samples)
    while remaining > 0:
        size = min(CHUNK, remaining)
        z = cfg.mean + cfg.sigma * rng.standard_normal((size, 3))
        w = cfg.t * z[:, 0] + (1.0 - cfg.t) * z[:, 1]
        losses = np.minimum((w[:, None] - z) ** 2, c2)
        diff = losses[:, 2] - 0.5 * (losses[:, 0] + losses[:, 1])
        total += float(diff.sum())
        total_sq += float((diff ** 2).sum())
        remaining -= size
    mean, variance = _mean_and_variance(total, total_sq, n)
    return mean, math.sqrt(variance / n)


def default_t_grid(points: int = 25) -> List[float]:
    """Equispaced grid on (0.02, 0.5]."""
    return [float(t) for t in np.linspace(0.02, 0.5, points + 1)[1:]]


def toy_bound_row(cfg: ToyConfig, alphas: Sequence[float], method: str = "mc",
                  nodes: int = HERMITE_NODES, tolerance: float = QUADRATURE_TOLERANCE) -> ToySweepRow:
    """True generalization error and every bound at one t; ``nodes`` and ``tolerance`` drive quadrature."""
    sg = SubGaussianParams.from_loss_range(0.0, cfg.c ** 2)
    gen, gen_se = toy_true_gen_error(cfg)
    mi = [toy_information(cfg, i, InfoKind.mi()) for i in (1, 2)]
    bound_js: Dict[float, float] = {}
    bound_renyi: Dict[float, float] = {}
    js_info: Dict[float, List[float]] = {}

    for a in alphas:
        cell = cfg.with_alpha(a)
        js = [toy_js_information(cell, i, method, nodes, tolerance)[0] for i in (1, 2)]
        renyi = [toy_information(cell, i, InfoKind.renyi(a)) for i in (1, 2)]
        js_info[a] = js
        bound_js[a] = gen_bound(js, InfoKind.js(a), sg).value
        bound_renyi[a] = gen_bound(renyi, InfoKind.renyi(a), sg).value

    return ToySweepRow(
        t=cfg.t, gen_true=gen, gen_se=gen_se,
        bound_mi=gen_bound(mi, InfoKind.mi(), sg).value,
        bound_js=bound_js, bound_renyi=bound_renyi, js_info=js_info
    )


def toy_sweep(base: ToyConfig, t_grid: Optional[Sequence[float]] = None,
              alphas: Sequence[float] = (0.25, 0.5, 0.75), method: str = "mc",
              threads: Optional[int] = None, nodes: int = HERMITE_NODES,
              tolerance: float = QUADRATURE_TOLERANCE) -> List[ToySweepRow]:
    """One row per t; each cell draws from its own (seed, t, α) stream."""
    t_grid = default_t_grid() if t_grid is None else list(t_grid)
    for t in t_grid:
        if not 0.0 < t <= 0.5:
            raise ValidationError(f"sweep t values must lie in (0, 0.5], got {t}")
    alphas = [as_alpha(a).value for a in alphas]
    return parallel_map(
        lambda t: toy_bound_row(base.with_t(t), alphas, method, nodes, tolerance), t_grid, threads
    )
