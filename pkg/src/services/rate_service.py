"""Convergence-rate experiments: log-log slopes of bounds against n."""

import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from ..config.settings import AppConfig
from ..core import adm, erm, measures, oracle
from ..models.distributions import ProbVec
from ..models.envelope import SubGaussianParams
from ..models.kinds import InfoKind
from ..models.learner import ExcessBoundParams, LearnerInstance
from ..utils import LoggerMixin
from ..utils.parallel import parallel_map

DEFAULT_NS = (8, 16, 32, 64, 128)
EXCESS_NS = (100, 1_000, 10_000, 100_000)


@dataclass
class SlopeFit:
    """Bound values against n and their fitted log-log slope."""

    label: str
    ns: List[int]
    values: List[float]
    slope: float = field(init=False)

    def __post_init__(self):
        self.slope = float(np.polyfit(np.log(self.ns), np.log(self.values), 1)[0])

    def to_dict(self) -> Dict[str, Any]:
        return {'label': self.label, 'ns': list(self.ns), 'values': list(self.values), 'slope': self.slope}


def bit_learner(n: int, beta_scale: float = 1.0) -> LearnerInstance:
    """Z ~ Bern(1/2), W in {0, 1}, 0-1 loss, Gibbs temperature β = beta_scale·n."""
    return LearnerInstance(
        mu=ProbVec.bernoulli(0.5),
        w_atoms=(0, 1),
        loss=np.array([[0.0, 1.0], [1.0, 0.0]]),
        n=n,
        beta=beta_scale * n
    )


class RateService(LoggerMixin):
    """Slope of the JS and Rényi bounds on a finite Gibbs learner, and of the excess-risk formula."""

    def __init__(self, config: Optional[AppConfig] = None):
        self.config = config or AppConfig()

    def bound_slopes(self, alphas: Sequence[float] = (0.5,), ns: Sequence[int] = DEFAULT_NS,
                     beta_scale: float = 1.0, threads: Optional[int] = None) -> List[SlopeFit]:
        """Fit slopes of gen_bound(JS(α)) and gen_bound(Rényi(α)) against n."""
        sg = SubGaussianParams.from_loss_range(0.0, 1.0)
        threads = self.config.runtime.threads if threads is None else threads

        def joint_for(n: int):
            instance = bit_learner(n, beta_scale)
            summary = oracle.exchangeable_sample_joints(instance, oracle.gibbs_by_counts(instance))
            return summary.joint

        with self.log_operation("rate", n=list(ns)):
            joints = parallel_map(joint_for, list(ns), threads)
            fits = []
            for a in alphas:
                for kind in (InfoKind.js(a), InfoKind.renyi(a)):
                    values = [adm.gen_bound([measures.info_measure(j, kind)] * n, kind, sg).value
                              for n, j in zip(ns, joints)]
                    fits.append(SlopeFit(kind.label(), list(ns), values))
        for fit in fits:
            self.logger.info(f"{fit.label}: slope {fit.slope:.4f}")
        return fits

    def excess_risk_slope(self, alpha: float = 0.5, ns: Sequence[int] = EXCESS_NS,
                          info_scale: float = 1.0, b: float = 1.0, lip: float = 1.0,
                          d: int = 1) -> SlopeFit:
        """JS excess-risk bound with β = √n and per-sample information info_scale/n."""
        values = []
        for n in ns:
            params = ExcessBoundParams(
                b=b, lip=lip, d=d, beta=math.sqrt(n), n=n, w_star_norm_sq=0.0,
                alpha=alpha, info=[info_scale / n] * n
            )
            values.append(erm.excess_risk_bound(params, InfoKind.js(alpha)).value)
        return SlopeFit(f"excess_js({alpha:.2f})", list(ns), values)
