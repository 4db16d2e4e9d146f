"""
Independent ground truth: exact enumeration of small learners, Monte Carlo
divergence estimates, finite-difference gradient checks and seeded random
instance generators.
"""

import itertools
import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

import numpy as np
from scipy.special import gammaln

from ..exceptions import DomainError, ValidationError
from ..models.distributions import AlphaLike, JointDist, ProbVec, as_alpha
from ..models.learner import (
    DEFAULT_ENUMERATION_LIMIT, EnumeratedLearner, LearnerInstance, LearningKernel
)
from ..utils.numerics import stable_sum
from ..utils.rng import stream
from ..utils.simplex import grid_minimize
from .gaussian import GaussianSampler

MIN_MC_SAMPLES = 10_000
MC_CHUNK = 1_000_000


def enumerate_learner(instance: LearnerInstance, kernel: LearningKernel,
                      limit: int = DEFAULT_ENUMERATION_LIMIT) -> EnumeratedLearner:
    """
    Exact per-sample joints P_{W,Z_i} and the expected generalization error,
    computed both as E_{P_W⊗μ^n}[L_E] − E_{P_{W,S}}[L_E] and as the average of
    per-sample gaps E_{P_W⊗μ}[ℓ] − E_{P_{W,Z_i}}[ℓ].
    """
    instance.check_enumerable(limit)
    datasets = instance.dataset_matrix()
    if kernel.table.shape != (len(datasets), instance.n_w):
        raise ValidationError(
            f"kernel has {kernel.table.shape[0]} rows, instance has {len(datasets)} datasets"
        )
    weights = instance.dataset_probabilities(datasets)
    weighted = kernel.table * weights[:, None]
    p_w = weighted.sum(axis=0)
    population = instance.population_risk()

    direct = stable_sum(p_w * population) - stable_sum(weighted * instance.empirical_risks(datasets))

    onehot = np.eye(instance.n_z)
    joints: List[JointDist] = []
    gaps = []
    independent = np.outer(p_w, instance.mu.mass)
    independent_risk = stable_sum(independent * instance.loss)
    for i in range(instance.n):
        mass = weighted.T @ onehot[datasets[:, i]]
        mass = mass / mass.sum()
        joints.append(JointDist(instance.w_atoms, instance.z_atoms, mass))
        gaps.append(independent_risk - stable_sum(mass * instance.loss))

    return EnumeratedLearner(
        instance=instance,
        kernel=kernel,
        per_sample_joints=joints,
        exact_gen=direct,
        exact_gen_by_samples=stable_sum(gaps) / instance.n
    )


@dataclass(frozen=True, eq=False)
class ExchangeableSummary:
    """Per-sample joint shared by all i, and the exact generalization error."""

    joint: JointDist
    exact_gen: float
    type_count: int


def _compositions(total: int, parts: int):
    for cuts in itertools.combinations(range(total + parts - 1), parts - 1):
        previous = -1
        counts = []
        for cut in cuts:
            counts.append(cut - previous - 1)
            previous = cut
        counts.append(total + parts - 1 - previous - 1)
        yield counts


def exchangeable_sample_joints(instance: LearnerInstance,
                               posterior: Callable[[np.ndarray], np.ndarray],
                               limit: int = DEFAULT_ENUMERATION_LIMIT) -> ExchangeableSummary:
    """
    Exact per-sample joint of a permutation-invariant kernel.

    ``posterior`` maps a count vector (occurrences of each z atom) to P(w | type).
    Types are enumerated with multinomial weights, and P(Z_i = z | type) = k_z/n.
    """
    n, k = instance.n, instance.n_z
    type_count = math.comb(n + k - 1, k - 1)
    if type_count > limit:
        raise ValidationError(f"{type_count} dataset types exceed the limit {limit}")

    log_mu = np.log(np.where(instance.mu.mass > 0, instance.mu.mass, 1.0))
    joint = np.zeros((instance.n_w, k))
    expected_empirical = []
    log_norm = gammaln(n + 1)
    for counts in _compositions(n, k):
        counts = np.asarray(counts)
        if np.any((counts > 0) & (instance.mu.mass == 0)):
            continue
        weight = math.exp(log_norm - gammaln(counts + 1).sum() + float(counts @ log_mu))
        if weight == 0.0:
            continue
        row = np.asarray(posterior(counts), dtype=float)
        joint += weight * np.outer(row, counts / n)
        expected_empirical.append(weight * float(row @ (instance.loss @ counts) / n))

    joint /= joint.sum()
    dist = JointDist(instance.w_atoms, instance.z_atoms, joint)
    p_w = joint.sum(axis=1)
    gen = stable_sum(p_w * instance.population_risk()) - stable_sum(expected_empirical)
    return ExchangeableSummary(dist, gen, type_count)


def gibbs_by_counts(instance: LearnerInstance) -> Callable[[np.ndarray], np.ndarray]:
    """Gibbs posterior as a function of the sample counts."""
    log_prior = np.log(instance.prior.mass)

    def posterior(counts: np.ndarray) -> np.ndarray:
        logits = log_prior - instance.beta * (instance.loss @ counts) / instance.n
        logits -= logits.max()
        weights = np.exp(logits)
        return weights / weights.sum()

    return posterior


def mc_divergence(first: GaussianSampler, second: GaussianSampler, integrand: str,
                  n_samples: int, seed: int, alpha: Optional[AlphaLike] = None) -> Tuple[float, float]:
    """
    Monte Carlo estimate and standard error of a divergence between two samplers.

    ``integrand`` is 'kl' for KL(first‖second), 'renyi' or 'js' with the first
    argument carrying exponent (weight) 1 − α, matching the discrete measures.
    """
    if n_samples < MIN_MC_SAMPLES:
        raise ValidationError(f"mc_divergence needs at least {MIN_MC_SAMPLES} samples")
    rng = stream(seed, "mc_divergence", integrand)
    n = int(n_samples)

    def chunked(sampler: GaussianSampler, values: Callable[[np.ndarray], np.ndarray]) -> Tuple[float, float]:
        total = total_sq = 0.0
        remaining = n
        while remaining > 0:
            size = min(MC_CHUNK, remaining)
            v = values(sampler.sample(rng, size))
            total += float(v.sum())
            total_sq += float((v ** 2).sum())
            remaining -= size
        mean = total / n
        variance = max(total_sq / n - mean * mean, 0.0) * n / (n - 1)
        return mean, variance

    if integrand == "kl":
        mean, variance = chunked(first, lambda x: first.logpdf(x) - second.logpdf(x))
        return mean, math.sqrt(variance / n)

    a = as_alpha(alpha).value
    if integrand == "renyi":
        # ∫ second^α first^(1−α) = E_first[(second/first)^α]
        mean, variance = chunked(first, lambda x: np.exp(a * (second.logpdf(x) - first.logpdf(x))))
        estimate = math.log(mean) / (a - 1.0)
        return estimate, math.sqrt(variance / n) / (mean * (1.0 - a))

    if integrand == "js":
        def log_mix(x: np.ndarray) -> np.ndarray:
            return np.logaddexp(math.log(a) + second.logpdf(x), math.log1p(-a) + first.logpdf(x))

        mean_s, var_s = chunked(second, lambda x: second.logpdf(x) - log_mix(x))
        mean_f, var_f = chunked(first, lambda x: first.logpdf(x) - log_mix(x))
        estimate = a * mean_s + (1.0 - a) * mean_f
        return estimate, math.sqrt((a * a * var_s + (1.0 - a) ** 2 * var_f) / n)

    raise ValidationError(f"unknown integrand {integrand!r}")


def finite_diff_grad_check(objective: Callable[[np.ndarray], float],
                           gradient: Callable[[np.ndarray], np.ndarray],
                           point: np.ndarray, step: float = 1e-6,
                           require_positive: bool = True) -> float:
    """max_k |analytic_k − central difference_k| / (1 + |analytic_k|)."""
    if not 1e-8 <= step <= 1e-4:
        raise ValidationError(f"finite-difference step must lie in [1e-8, 1e-4], got {step}")
    point = np.asarray(point, dtype=float)
    if require_positive and point.min() <= 10.0 * step:
        raise DomainError(f"point is within {10 * step:g} of the boundary", point=point)

    analytic = np.asarray(gradient(point), dtype=float)
    deviations = []
    for k in range(point.size):
        shift = np.zeros_like(point)
        shift[k] = step
        numeric = (objective(point + shift) - objective(point - shift)) / (2.0 * step)
        deviations.append(abs(analytic[k] - numeric) / (1.0 + abs(analytic[k])))
    return float(max(deviations))


def grid_search_simplex(batch_objective: Callable[[np.ndarray], np.ndarray],
                        objective: Callable[[np.ndarray], float],
                        dim: int, step: float = 1e-3) -> Tuple[np.ndarray, float]:
    """Exhaustive grid over the simplex then local refinement."""
    return grid_minimize(batch_objective, objective, dim, step)


def random_distribution(rng: np.random.Generator, size: int, zero_probability: float = 0.0) -> np.ndarray:
    """Dirichlet(1) masses, some entries zeroed with the given probability."""
    mass = rng.dirichlet(np.ones(size))
    if zero_probability > 0:
        keep = rng.random(size) >= zero_probability
        if keep.any():
            mass = np.where(keep, mass, 0.0)
            mass /= mass.sum()
    return mass


def random_joint(rng: np.random.Generator, n_w: int, n_z: int, zero_probability: float = 0.0) -> JointDist:
    mass = random_distribution(rng, n_w * n_z, zero_probability).reshape(n_w, n_z)
    return JointDist.from_matrix(mass)


def random_kernel(rng: np.random.Generator, instance: LearnerInstance,
                  deterministic_probability: float = 0.2) -> LearningKernel:
    """Random stochastic kernel; some rows are point masses."""
    rows = []
    for _ in range(instance.dataset_count):
        if rng.random() < deterministic_probability:
            row = np.zeros(instance.n_w)
            row[rng.integers(instance.n_w)] = 1.0
        else:
            row = rng.dirichlet(np.ones(instance.n_w))
        rows.append(row)
    return LearningKernel(instance.w_atoms, np.array(rows), label="random")


def fuzz_instance(master_seed: int, index: int, max_w: int = 4, max_z: int = 4,
                  max_n: int = 3) -> Tuple[LearnerInstance, LearningKernel]:
    """Instance number ``index`` of the fuzz stream: losses in [0, 1], random kernel."""
    rng = stream(master_seed, "fuzz", index)
    n_w = int(rng.integers(2, max_w + 1))
    n_z = int(rng.integers(2, max_z + 1))
    n = int(rng.integers(1, max_n + 1))
    mu = ProbVec.from_masses(random_distribution(rng, n_z), atoms=range(n_z))
    instance = LearnerInstance(
        mu=mu,
        w_atoms=tuple(range(n_w)),
        loss=rng.random((n_w, n_z)),
        n=n,
        beta=float(rng.uniform(0.5, 5.0))
    )
    return instance, random_kernel(rng, instance)
