"""Verification suites: identities, inequalities, bound soundness, constants and rates."""

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional

import numpy as np

from ..config.settings import AppConfig
from ..core import adm, measures, oracle
from ..core.measures import decomposition_residual
from ..exceptions import ValidationError
from ..models.distributions import JointDist, ProbVec
from ..models.envelope import CgfEnvelope, SubGaussianParams
from ..models.kinds import InfoKind
from ..utils import LoggerMixin
from ..utils.parallel import parallel_map
from ..utils.rng import stream
from .rate_service import RateService

ALPHA_GRID = tuple(round(0.1 * k, 1) for k in range(1, 10))
BOUND_ALPHAS = (0.25, 0.5, 0.75)
INEQUALITY_SLACK = 1e-12


@dataclass
class SuiteResult:
    """Pass/fail tally of one suite, with the first counterexample found."""

    name: str
    passed: int = 0
    failed: int = 0
    max_residual: float = 0.0
    counterexample: Optional[Dict[str, Any]] = None
    details: Dict[str, Any] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def record(self, ok: bool, residual: float = 0.0, *, case: Optional[Callable[[], Dict[str, Any]]] = None):
        if math.isfinite(residual):
            self.max_residual = max(self.max_residual, residual)
        if ok:
            self.passed += 1
            return
        self.failed += 1
        if self.counterexample is None and case is not None:
            self.counterexample = case()

    def merge(self, other: "SuiteResult") -> None:
        self.passed += other.passed
        self.failed += other.failed
        self.max_residual = max(self.max_residual, other.max_residual)
        if self.counterexample is None:
            self.counterexample = other.counterexample

    def to_dict(self) -> Dict[str, Any]:
        return {
            'passed': self.passed,
            'failed': self.failed,
            'max_residual': self.max_residual,
            'counterexample': self.counterexample,
            **self.details
        }


def _leq(left: float, right: float) -> bool:
    if math.isinf(right):
        return True
    return left <= right + INEQUALITY_SLACK + 1e-9 * abs(right)


def _random_alpha(rng: np.random.Generator) -> float:
    return float(rng.uniform(0.01, 0.99))


class VerificationService(LoggerMixin):
    """Brute-force checks of the decompositions, inequalities and bounds."""

    def __init__(self, config: Optional[AppConfig] = None):
        self.config = config or AppConfig()
        self.tolerance = self.config.numerics.identity_tolerance

    # identities

    def _identity_case(self, seed: int, index: int) -> SuiteResult:
        result = SuiteResult("identity")
        rng = stream(seed, "identity", index)
        n_w, n_z = int(rng.integers(2, 5)), int(rng.integers(2, 5))
        joint = oracle.random_joint(rng, n_w, n_z, zero_probability=0.2)
        aux = JointDist.from_matrix(
            oracle.random_distribution(rng, n_w * n_z, zero_probability=0.1).reshape(n_w, n_z)
        )
        a = _random_alpha(rng)

        def case(name: str) -> Callable[[], Dict[str, Any]]:
            return lambda: {'identity': name, 'alpha': a, 'joint': joint.mass.tolist(),
                            'aux': aux.mass.tolist()}

        lhs, residual = measures.js_mixture_decomposition(joint, aux, a)
        gap = decomposition_residual(lhs, measures.info_measure(joint, InfoKind.js(a)), residual)
        result.record(gap <= self.tolerance, gap, case=case("js_mixture"))

        lhs, residual = measures.renyi_geometric_decomposition(joint, aux, a)
        gap = decomposition_residual(lhs, (1.0 - a) * measures.info_measure(joint, InfoKind.renyi(a)), residual)
        result.record(gap <= self.tolerance, gap, case=case("renyi_geometric"))
        return result

    def identity_suite(self, cases: int, seed: int, threads: Optional[int] = None) -> SuiteResult:
        """Both decompositions on random (joint, auxiliary, α) triples."""
        return self._collect("identity", lambda i: self._identity_case(seed, i), cases, threads)

    # inequalities

    def _inequality_case(self, seed: int, index: int) -> SuiteResult:
        result = SuiteResult("inequality")
        rng = stream(seed, "inequality", index)
        n_w, n_z = int(rng.integers(2, 5)), int(rng.integers(2, 5))
        joint = oracle.random_joint(rng, n_w, n_z, zero_probability=0.15)
        p = ProbVec.from_masses(oracle.random_distribution(rng, n_z, 0.2))
        q = ProbVec.from_masses(oracle.random_distribution(rng, n_z, 0.2))
        mi = measures.mutual_information(joint)
        lautum = measures.lautum_information(joint)

        def case(name: str, a: float) -> Callable[[], Dict[str, Any]]:
            return lambda: {'inequality': name, 'alpha': a, 'joint': joint.mass.tolist(),
                            'p': p.mass.tolist(), 'q': q.mass.tolist()}

        previous_joint = previous_pair = 0.0
        for a in ALPHA_GRID:
            js = measures.info_measure(joint, InfoKind.js(a))
            renyi = measures.info_measure(joint, InfoKind.renyi(a))
            sibson = measures.info_measure(joint, InfoKind.sibson(a))
            pair = measures.renyi_div(p, q, a)

            result.record(_leq(js, (1.0 - a) * mi), case=case("js_below_scaled_mi", a))
            result.record(_leq(renyi, a / (1.0 - a) * mi), case=case("renyi_below_scaled_mi", a))
            result.record(_leq(renyi, lautum), case=case("renyi_below_lautum", a))
            result.record(_leq(js, measures.binary_entropy(a)), case=case("js_below_entropy", a))
            result.record(_leq(measures.js_div(p, q, a), measures.binary_entropy(a)), case=case("js_pair_below_entropy", a))
            result.record(_leq(sibson, renyi), case=case("sibson_below_renyi", a))
            result.record(_leq(previous_joint, renyi), case=case("renyi_monotone_joint", a))
            result.record(pair == math.inf or _leq(previous_pair, pair), case=case("renyi_monotone_pair", a))
            previous_joint, previous_pair = renyi, pair

        js_half = measures.js_div(p, q, 0.5)
        mix = ProbVec(p.atoms, 0.5 * (p.mass + q.mass))
        classical = 0.5 * measures.kl(p, mix) + 0.5 * measures.kl(q, mix)
        gap = abs(js_half - classical)
        result.record(gap <= self.tolerance, gap, case=case("classical_jsd", 0.5))
        return result

    def inequality_suite(self, cases: int, seed: int, threads: Optional[int] = None) -> SuiteResult:
        """Ordering relations between the measures over the α grid."""
        return self._collect("inequality", lambda i: self._inequality_case(seed, i), cases, threads)

    # bound soundness

    def _soundness_case(self, seed: int, index: int) -> SuiteResult:
        result = SuiteResult("soundness")
        instance, kernel = oracle.fuzz_instance(seed, index)
        learner = oracle.enumerate_learner(instance, kernel, self.config.numerics.enumeration_limit)
        gen = learner.exact_gen
        sg = SubGaussianParams.from_loss_range(0.0, 1.0)
        rng = stream(seed, "soundness_aux", index)

        def case(bound: str, value: float) -> Callable[[], Dict[str, Any]]:
            return lambda: {'bound': bound, 'value': value, 'exact_gen': gen, 'fuzz_index': index,
                            'learner': learner.to_dict()}

        result.record(learner.route_gap <= 1e-12, learner.route_gap, case=case("route_agreement", learner.route_gap))

        joints = learner.per_sample_joints
        kinds = [InfoKind.mi(), InfoKind.lautum()]
        for a in BOUND_ALPHAS:
            kinds += [InfoKind.js(a), InfoKind.renyi(a), InfoKind.sibson(a), InfoKind.pinsker_renyi(a)]
        for kind in kinds:
            info = [measures.info_measure(j, kind) for j in joints]
            value = adm.gen_bound(info, kind, sg).value
            result.record(value >= abs(gen) - INEQUALITY_SLACK, case=case(kind.label(), value))

        envelope = CgfEnvelope.sub_gaussian(0.5)
        auxiliaries = [
            JointDist(j.w_atoms, j.z_atoms, rng.dirichlet(np.ones(j.mass.size)).reshape(j.shape))
            for j in joints
        ]
        to_product = [measures.kl(j.product(), q) for j, q in zip(joints, auxiliaries)]
        to_joint = [measures.kl(j, q) for j, q in zip(joints, auxiliaries)]
        upper, lower = adm.adm_general_bound(
            to_product, to_joint, envelope, envelope,
            grid_points=self.config.numerics.legendre_grid_points,
            tolerance=self.config.numerics.golden_section_tolerance
        )
        result.record(upper >= gen - 1e-9 and lower >= -gen - 1e-9, case=case("auxiliary_general", upper))

        a = _random_alpha(rng)
        direct = adm.direct_auxiliary_bound(to_product, to_joint, 0.5, a).value
        result.record(direct >= abs(gen) - INEQUALITY_SLACK, case=case("direct_auxiliary", direct))
        to_aux_product = [measures.kl(q, j.product()) for j, q in zip(joints, auxiliaries)]
        to_aux_joint = [measures.kl(q, j) for j, q in zip(joints, auxiliaries)]
        reverse = adm.reverse_auxiliary_bound(to_aux_product, to_aux_joint, sg, a)
        result.record(reverse.value >= abs(gen) - INEQUALITY_SLACK, case=case("reverse_auxiliary", reverse.value))

        for j, q in zip(joints, auxiliaries):
            lhs, residual = measures.js_mixture_decomposition(j, q, a)
            gap = decomposition_residual(lhs, measures.info_measure(j, InfoKind.js(a)), residual)
            result.record(gap <= self.tolerance, gap, case=case("js_mixture_identity", gap))
            lhs, residual = measures.renyi_geometric_decomposition(j, q, a)
            gap = decomposition_residual(lhs, (1.0 - a) * measures.info_measure(j, InfoKind.renyi(a)), residual)
            result.record(gap <= self.tolerance, gap, case=case("renyi_geometric_identity", gap))
        return result

    def soundness_suite(self, cases: int, seed: int, threads: Optional[int] = None) -> SuiteResult:
        """Every bound against the exact generalization error of fuzzed learners."""
        return self._collect("soundness", lambda i: self._soundness_case(seed, i), cases, threads)

    # constants and rates

    def constant_suite(self) -> SuiteResult:
        result = SuiteResult("constant")
        unit = SubGaussianParams.uniform(1.0)
        half = adm.js_constant_bound(unit, 0.5).value
        expected = 2.0 * math.sqrt(2.0 * math.log(2.0))
        result.record(abs(half - expected) <= 1e-12, abs(half - expected),
                      case=lambda: {'check': 'half_alpha_constant', 'value': half})

        grid = [round(0.05 * k, 2) for k in range(1, 20)]
        values = [adm.js_constant_bound(unit, a).value for a in grid]
        result.record(min(values) == half, case=lambda: {'check': 'argmin', 'values': values})

        bounded = SubGaussianParams.from_loss_range(0.0, 1.0)
        js = adm.js_constant_bound(bounded, 0.5).value
        tv = adm.total_variation_constant(bounded).value
        result.record(js < tv, case=lambda: {'check': 'below_total_variation', 'js': js, 'tv': tv})

        threshold = adm.tightness_comparison(0.5, 1.0 - 1e-6, [1.0], bounded).threshold
        gap = abs(threshold - 4.0 * math.log(2.0))
        result.record(gap <= 1e-5, gap, case=lambda: {'check': 'tightness_limit', 'threshold': threshold})
        return result

    def rate_suite(self, threads: Optional[int] = None) -> SuiteResult:
        result = SuiteResult("rate")
        rates = RateService(self.config)
        fits = rates.bound_slopes(alphas=(0.5,), threads=threads)
        for fit in fits:
            deviation = abs(fit.slope + 0.5)
            result.record(deviation <= 0.1, deviation, case=lambda fit=fit: fit.to_dict())
        excess = rates.excess_risk_slope()
        deviation = abs(excess.slope + 0.5)
        result.record(deviation <= 0.05, deviation, case=lambda: excess.to_dict())
        result.details['slopes'] = {fit.label: fit.slope for fit in fits + [excess]}
        return result

    # orchestration

    def _collect(self, name: str, run_case: Callable[[int], SuiteResult], cases: int,
                 threads: Optional[int]) -> SuiteResult:
        threads = self.config.runtime.threads if threads is None else threads
        total = SuiteResult(name)
        for partial in parallel_map(run_case, range(cases), threads):
            total.merge(partial)
        self.logger.log_suite_result(name, total.passed, total.failed, residual=total.max_residual)
        return total

    def run(self, cases: int, seed: int, threads: Optional[int] = None,
            include_rate: bool = True) -> Dict[str, Any]:
        """Run every suite and assemble the report payload."""
        if cases < 1:
            raise ValidationError(f"--cases must be a positive integer, got {cases}")

        with self.log_operation("verify", n=cases, seed=seed):
            suites = [
                self.identity_suite(cases, seed, threads),
                self.inequality_suite(cases, seed, threads),
                self.soundness_suite(cases, seed, threads),
                self.constant_suite(),
            ]
            if include_rate:
                suites.append(self.rate_suite(threads))

        return {
            'seed': seed,
            'cases': cases,
            'passed': all(s.ok for s in suites),
            'max_identity_residual': max(s.max_residual for s in suites[:1]),
            'suites': {s.name: s.to_dict() for s in suites}
        }
