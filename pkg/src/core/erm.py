"""
Regularized empirical risk minimization on finite hypothesis spaces.

Per dataset s the posterior minimizes

    F(P) = Σ_w P(w)·L_E(w, s) + D(P ‖ prior) / β

over the simplex, with D the KL (closed-form Gibbs posterior), the α-JS or
the α-Rényi divergence. P is the first divergence argument, so with
M = α·Q + (1−α)·P and Z = Σ Q^α P^(1−α) the gradients in P are

    KL:    log(P/Q) + 1
    JS:    (1 − α)·log(P/M)
    Rényi: −(Q/P)^α / Z
"""

import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import integrate
from scipy.optimize import brentq
from scipy.special import logsumexp

from ..config.settings import SolverConfig
from ..exceptions import ConvergenceError, NumericalAccuracyError, ValidationError
from ..models.distributions import AlphaLike, ProbVec, as_alpha
from ..models.kinds import InfoKind, Measure
from ..models.learner import Dataset, ExcessBoundParams, LearnerInstance, LearningKernel
from ..models.report import BoundReport
from ..utils.numerics import stable_sum
from ..utils.parallel import parallel_map
from .measures import binary_entropy

INF = math.inf


@dataclass(frozen=True)
class Regularizer:
    """Divergence used as regularizer: 'kl', 'js' or 'renyi' with its order."""

    name: str
    alpha: float = 0.5

    def __post_init__(self):
        if self.name not in ("kl", "js", "renyi"):
            raise ValidationError(f"unknown regularizer {self.name!r}")
        if self.name != "kl":
            object.__setattr__(self, 'alpha', as_alpha(self.alpha).value)

    @classmethod
    def of(cls, reg: Union["Regularizer", InfoKind, str], alpha: Optional[AlphaLike] = None) -> "Regularizer":
        if isinstance(reg, Regularizer):
            return reg
        if isinstance(reg, InfoKind):
            names = {Measure.JS: "js", Measure.RENYI: "renyi"}
            if reg.measure not in names:
                raise ValidationError(f"regularizer must be js or renyi, got {reg}")
            return cls(names[reg.measure], reg.alpha_value)
        reg = reg.lower()
        if reg == "kl":
            return cls("kl")
        if "(" in reg:
            return cls.of(InfoKind.parse(reg))
        if alpha is None:
            raise ValidationError(f"regularizer {reg} needs an alpha")
        return cls(reg, float(alpha))

    def label(self) -> str:
        return "kl" if self.name == "kl" else f"{self.name}({self.alpha:.2f})"


def divergence_value(p: np.ndarray, q: np.ndarray, reg: Regularizer) -> float:
    """D(p ‖ q) for a strictly positive prior q."""
    a = reg.alpha
    if reg.name == "kl":
        support = p > 0
        return stable_sum(p[support] * np.log(p[support] / q[support]))
    if reg.name == "js":
        mix = a * q + (1.0 - a) * p
        support = p > 0
        return (a * stable_sum(q * np.log(q / mix))
                + (1.0 - a) * stable_sum(p[support] * np.log(p[support] / mix[support])))
    total = stable_sum(np.power(q, a) * np.power(p, 1.0 - a))
    return math.log(total) / (a - 1.0)


def divergence_gradient(p: np.ndarray, q: np.ndarray, reg: Regularizer) -> np.ndarray:
    """Gradient of D(p ‖ q) in p at an interior point."""
    a = reg.alpha
    if reg.name == "kl":
        return np.log(p / q) + 1.0
    if reg.name == "js":
        return (1.0 - a) * np.log(p / (a * q + (1.0 - a) * p))
    total = float(np.sum(np.power(q, a) * np.power(p, 1.0 - a)))
    return -np.power(q / p, a) / total


def objective_value(risk: np.ndarray, p: np.ndarray, q: np.ndarray, beta: float, reg: Regularizer) -> float:
    return float(p @ risk) + divergence_value(p, q, reg) / beta


@dataclass(frozen=True, eq=False)
class SolverResult:
    """Posterior of one dataset plus its optimality certificate."""

    posterior: ProbVec
    objective: float
    certificate: float
    iterations: int
    converged: bool

    @property
    def boundary_mass(self) -> float:
        """Smallest posterior mass; near zero means the optimum sits close to a face."""
        return float(self.posterior.mass.min())


def gibbs_posterior(instance: LearnerInstance, dataset: Sequence[int]) -> ProbVec:
    """prior(w)·exp(−β·L_E(w, s)), normalized."""
    logits = np.log(instance.prior.mass) - instance.beta * instance.empirical_risk(dataset)
    return ProbVec(instance.w_atoms, np.exp(logits - logsumexp(logits)))


def _mirror_descent(risk: np.ndarray, prior: np.ndarray, beta: float, reg: Regularizer,
                    start: np.ndarray, config: SolverConfig) -> Tuple[np.ndarray, float, float, int, bool]:
    floor = config.mass_floor
    x = np.maximum(start, floor)
    x /= x.sum()

    def f(point: np.ndarray) -> float:
        return objective_value(risk, point, prior, beta, reg)

    def grad(point: np.ndarray) -> np.ndarray:
        return risk + divergence_gradient(point, prior, reg) / beta

    step = config.initial_step * beta
    fx, g = f(x), grad(x)
    certificate = float(x @ g - g.min())
    iterations = 0

    while certificate > config.gradient_tolerance and iterations < config.max_iterations:
        iterations += 1
        while True:
            logits = np.log(x) - step * (g - g.min())
            candidate = np.exp(logits - logsumexp(logits))
            candidate = np.maximum(candidate, floor)
            candidate /= candidate.sum()
            f_candidate = f(candidate)
            model = fx + float(g @ (candidate - x)) + float(candidate @ np.log(candidate / x)) / step
            if f_candidate <= model + 1e-15 * max(1.0, abs(fx)) or step < 1e-30:
                break
            step *= config.armijo_shrink
        if np.array_equal(candidate, x):
            break
        x, fx = candidate, f_candidate
        g = grad(x)
        certificate = float(x @ g - g.min())
        step /= config.armijo_shrink

    return x, fx, certificate, iterations, certificate <= config.gradient_tolerance


def _decreasing_root(fn: Callable[[float], float]) -> float:
    """Root in (0, ∞) of a function positive near 0 and negative far out."""
    lo, hi = 1.0, 1.0
    while fn(lo) <= 0.0 and lo > 1e-300:
        lo *= 0.5
    while fn(hi) >= 0.0 and hi < 1e300:
        hi *= 2.0
    return brentq(fn, lo, hi, xtol=1e-300, maxiter=1000)


def stationary_posterior(risk: np.ndarray, prior: np.ndarray, beta: float, reg: Regularizer) -> np.ndarray:
    """
    Exact minimizer of F from the stationarity conditions β·L_E + ∇D = λ.

    Every gradient sends its coordinate to −∞ at zero mass, so the optimum is
    interior and the conditions hold on every atom. With Δ = L_E − min L_E:

        KL:    P ∝ Q·exp(−β·L_E)
        JS:    P = α·Q·e / ((1−α)(1 − e)),  e = exp(−τ − β·Δ/(1−α)),  τ > 0
        Rényi: P ∝ Q·(u/v)^(−1/α),  u = β·Δ + v,  v > 0

    The scalar τ solves Σ P = 1. The scalar v solves Σ Q·(u/v)^(−1/α)·(1 − u) = 0,
    the condition that keeps Z = Σ Q^α P^(1−α) consistent with the normalization.
    """
    log_q = np.log(prior)
    if reg.name == "kl":
        logits = log_q - beta * risk
        return np.exp(logits - logsumexp(logits))

    a = reg.alpha
    delta = beta * (risk - risk.min())
    if reg.name == "js":
        def log_mass(tau: float) -> np.ndarray:
            log_e = -tau - delta / (1.0 - a)
            return math.log(a / (1.0 - a)) + log_q + log_e - np.log(-np.expm1(log_e))

        tau = _decreasing_root(lambda t: float(logsumexp(log_mass(t))))
        mass = np.exp(log_mass(tau))
        return mass / mass.sum()

    def residual(v: float) -> float:
        u = delta + v
        return float(np.sum(prior * np.exp(-np.log(u / v) / a) * (1.0 - u)))

    v = _decreasing_root(residual)
    logits = log_q - np.log((delta + v) / v) / a
    return np.exp(logits - logsumexp(logits))


def _rounding_floor(g: np.ndarray) -> float:
    """Smallest Frank-Wolfe gap distinguishable from rounding in g."""
    return 64.0 * float(np.finfo(float).eps) * max(1.0, float(np.abs(g).max()))


def _finish_at_stationary_point(risk: np.ndarray, prior: np.ndarray, beta: float, reg: Regularizer,
                                x: np.ndarray, fx: float, certificate: float,
                                config: SolverConfig) -> Tuple[np.ndarray, float, float, bool]:
    """
    Replace a stalled iterate by the exact stationary point when its gap is
    no larger. At small β the objective carries rounding of order eps/β, so
    the gap decides rather than the objective.
    """
    candidate = np.maximum(stationary_posterior(risk, prior, beta, reg), config.mass_floor)
    candidate /= candidate.sum()
    g = risk + divergence_gradient(candidate, prior, reg) / beta
    gap = float(candidate @ g - g.min())
    tolerance = max(config.gradient_tolerance, _rounding_floor(g))
    if gap <= max(certificate, tolerance):
        return candidate, objective_value(risk, candidate, prior, beta, reg), gap, gap <= tolerance
    return x, fx, certificate, False


def solve_regularized_posterior(instance: LearnerInstance, dataset: Sequence[int],
                                reg: Union[Regularizer, InfoKind, str],
                                config: Optional[SolverConfig] = None,
                                raise_on_failure: bool = True) -> SolverResult:
    """
    Entropic mirror descent with Armijo backtracking on the simplex.

    Starts from whichever of the prior and the Gibbs posterior has the lower
    objective, so the returned objective never exceeds either. The
    certificate is the Frank-Wolfe gap ⟨P, ∇F⟩ − min ∇F.

    The gap grows like 1/β while the accepted steps are limited by rounding,
    so descent can stall just above the tolerance. A stalled run finishes at
    the exact stationary point, and counts as converged once its gap is
    within the tolerance or the rounding floor of ∇F.
    """
    reg = Regularizer.of(reg)
    config = config or SolverConfig()
    prior = instance.prior.mass
    risk = instance.empirical_risk(dataset)

    if instance.beta == 0.0:
        return SolverResult(instance.prior, float(prior @ risk), 0.0, 0, True)

    gibbs = gibbs_posterior(instance, dataset).mass
    starts = [prior, np.maximum(gibbs, config.mass_floor) / np.maximum(gibbs, config.mass_floor).sum()]
    start = min(starts, key=lambda s: objective_value(risk, s, prior, instance.beta, reg))

    x, fx, certificate, iterations, converged = _mirror_descent(
        risk, prior, instance.beta, reg, start, config
    )
    if not converged and config.stationary_finish:
        x, fx, certificate, converged = _finish_at_stationary_point(
            risk, prior, instance.beta, reg, x, fx, certificate, config
        )
    mass = np.where(x <= config.mass_floor, 0.0, x)
    posterior = ProbVec(instance.w_atoms, mass / mass.sum())

    if not converged and raise_on_failure:
        raise ConvergenceError(
            f"{reg.label()} solver stopped after {iterations} iterations with certificate {certificate:.3e}",
            best_iterate=posterior, certificate=certificate, iterations=iterations
        )
    return SolverResult(posterior, fx, certificate, iterations, converged)


def gibbs_kernel(instance: LearnerInstance, limit: int = 1_000_000) -> LearningKernel:
    """Closed-form Gibbs posterior for every dataset."""
    instance.check_enumerable(limit)
    logits = np.log(instance.prior.mass)[None, :] - instance.beta * instance.empirical_risks()
    table = np.exp(logits - logsumexp(logits, axis=1, keepdims=True))
    return LearningKernel(instance.w_atoms, table, label="gibbs")


def regularized_kernel(instance: LearnerInstance, reg: Union[Regularizer, InfoKind, str],
                       config: Optional[SolverConfig] = None, threads: Optional[int] = None,
                       limit: int = 1_000_000) -> LearningKernel:
    """
    Solve every dataset independently. Datasets with the same multiset of
    samples share a posterior, so each multiset is solved once.
    """
    reg = Regularizer.of(reg)
    config = config or SolverConfig()
    instance.check_enumerable(limit)
    datasets = list(instance.datasets())
    keys = [tuple(sorted(s)) for s in datasets]
    unique = sorted(set(keys))

    results = parallel_map(
        lambda s: solve_regularized_posterior(instance, s, reg, config, raise_on_failure=False),
        unique, threads
    )
    failed = [(s, r) for s, r in zip(unique, results) if not r.converged]
    if failed:
        s, worst = max(failed, key=lambda item: item[1].certificate)
        raise ConvergenceError(
            f"{reg.label()} solver did not converge on {len(failed)} dataset(s); "
            f"worst certificate {worst.certificate:.3e} at dataset {s}",
            best_iterate=worst.posterior, certificate=worst.certificate, iterations=worst.iterations
        )

    by_key: Dict[Tuple[int, ...], SolverResult] = dict(zip(unique, results))
    rows = [by_key[k] for k in keys]
    return LearningKernel(
        instance.w_atoms,
        np.array([r.posterior.mass for r in rows]),
        certificates=np.array([r.certificate for r in rows]),
        iterations=np.array([r.iterations for r in rows]),
        label=reg.label()
    )


def excess_risk_exact(instance: LearnerInstance, kernel: LearningKernel,
                      limit: int = 1_000_000) -> float:
    """E[L_μ(W)] − min_w L_μ(w) by enumerating every dataset."""
    instance.check_enumerable(limit)
    population = instance.population_risk()
    weights = instance.dataset_probabilities()
    expected = stable_sum(weights * (kernel.table @ population))
    return max(0.0, expected - float(population.min()))


def gaussian_js_divergence_1d(w_star: float, beta: float, alpha: AlphaLike,
                              tolerance: float = 1e-10) -> float:
    """
    JS_α(N(w⋆, 1/β) ‖ N(0, 1)) by quadrature, the first argument weighted 1 − α.
    """
    a = as_alpha(alpha).value
    if beta <= 0:
        raise ValidationError("beta must be positive")
    scale = 1.0 / math.sqrt(beta)

    def log_normal(x: float, mean: float, sd: float) -> float:
        return -0.5 * ((x - mean) / sd) ** 2 - math.log(sd) - 0.5 * math.log(2.0 * math.pi)

    def integrand(x: float) -> float:
        log_first = log_normal(x, w_star, scale)
        log_second = log_normal(x, 0.0, 1.0)
        log_mix = np.logaddexp(math.log(a) + log_second, math.log1p(-a) + log_first)
        return (a * math.exp(log_second) * (log_second - log_mix)
                + (1.0 - a) * math.exp(log_first) * (log_first - log_mix))

    lower = min(-12.0, w_star - 12.0 * scale)
    upper = max(12.0, w_star + 12.0 * scale)
    value, error = integrate.quad(integrand, lower, upper, points=[0.0, w_star],
                                  limit=400, epsabs=tolerance, epsrel=tolerance)
    if error > 100 * tolerance:
        raise NumericalAccuracyError(
            f"JS quadrature error estimate {error:.3e} above tolerance", achieved=error, requested=tolerance
        )
    return min(max(value, 0.0), binary_entropy(a))


def gaussian_renyi_prior_term(w_star_norm_sq: float, beta: float, d: int, alpha: AlphaLike) -> float:
    """
    Rényi divergence between N(0, I_d) (exponent 1 − α) and N(w⋆, β⁻¹I_d):
    α/2·‖w⋆‖²/(α + (1−α)/β) + d/(2(α−1))·log(β^(α−1)/(α + (1−α)/β)).
    """
    a = as_alpha(alpha).value
    mixed = a + (1.0 - a) / beta
    mean_term = 0.5 * a * w_star_norm_sq / mixed
    log_term = d / (2.0 * (a - 1.0)) * ((a - 1.0) * math.log(beta) - math.log(mixed))
    return mean_term + log_term


def excess_risk_bound(p: ExcessBoundParams, kind: Union[InfoKind, str],
                      simplified_display: bool = False, js_quadrature: bool = False) -> BoundReport:
    """
    Excess-risk bound of the JS- or Rényi-regularized posterior:
    information term + L̃√d/β + prior divergence term/β.

    JS uses h(α) as the divergence term unless ``js_quadrature`` asks for the
    exact one-dimensional value. Rényi uses the Gaussian closed form, or the
    simplified display ‖w⋆‖²/(2β) + d·log β/(2β) + d·log α/(2β(1−α)) when
    ``simplified_display`` is set.
    """
    try:
        measure = kind.measure if isinstance(kind, InfoKind) else Measure(kind.lower())
    except ValueError:
        raise ValidationError(f"unknown excess-risk bound kind {kind!r}")
    a = p.alpha.value
    total_info = sum(p.info)
    lip_term = p.lip * math.sqrt(p.d) / p.beta

    if measure is Measure.JS:
        info_term = math.sqrt(2.0 * p.b ** 2 * total_info / (p.n * a * (1.0 - a)))
        if js_quadrature:
            if p.d != 1:
                raise ValidationError("JS quadrature is only available for d = 1")
            divergence = gaussian_js_divergence_1d(math.sqrt(p.w_star_norm_sq), p.beta, a)
        else:
            divergence = binary_entropy(a)
        name = "excess_js"
    elif measure is Measure.RENYI:
        info_term = math.sqrt(2.0 * p.b ** 2 * total_info / (p.n * a))
        if simplified_display:
            divergence = (0.5 * p.w_star_norm_sq + 0.5 * p.d * math.log(p.beta)
                          + p.d * math.log(a) / (2.0 * (1.0 - a)))
        else:
            divergence = gaussian_renyi_prior_term(p.w_star_norm_sq, p.beta, p.d, a)
        name = "excess_renyi"
    else:
        raise ValidationError(f"excess-risk bound supports js and renyi, got {kind}")

    divergence_term = divergence / p.beta
    value = max(0.0, info_term + lip_term + divergence_term)
    return BoundReport(name, value, {
        **p.to_dict(),
        'info_term': info_term,
        'lipschitz_term': lip_term,
        'divergence_term': divergence_term,
        'simplified_display': simplified_display,
        'js_quadrature': js_quadrature
    })
