"""Gaussian mean-estimation case study: configuration and derived geometry."""

import math
from dataclasses import dataclass, replace, field
from typing import Any, Dict, List

import numpy as np

from ..exceptions import ValidationError
from .distributions import Alpha, AlphaLike, as_alpha


@dataclass(frozen=True)
class ToyConfig:
    """Z ~ N(mean, variance), W = t·Z1 + (1−t)·Z2, loss min((w−z)², c²)."""

    mean: float = 1.0
    variance: float = 1.0
    t: float = 0.5
    c: float = 0.25
    alpha: Alpha = Alpha(0.5)
    mc_samples: int = 1_000_000
    seed: int = 42

    def __post_init__(self):
        object.__setattr__(self, 'alpha', as_alpha(self.alpha))
        self.validate()

    def validate(self) -> None:
        if not np.isfinite(self.mean):
            raise ValidationError("mean must be finite")
        if not self.variance > 0 or not np.isfinite(self.variance):
            raise ValidationError(f"variance must be positive, got {self.variance!r}")
        if not 0.0 < self.t < 1.0:
            raise ValidationError(f"t must lie in (0, 1), got {self.t!r}")
        if not self.c > 0 or not np.isfinite(self.c):
            raise ValidationError(f"c must be positive, got {self.c!r}")
        if int(self.mc_samples) != self.mc_samples or self.mc_samples < 1:
            raise ValidationError("mc_samples must be a positive integer")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise ValidationError("seed must be a 64-bit unsigned integer")

    @classmethod
    def scaled_setting(cls, variance: float, **overrides) -> "ToyConfig":
        """μ = 1 and c = σ/4."""
        return cls(mean=1.0, variance=variance, c=math.sqrt(variance) / 4.0, **overrides)

    @property
    def sigma(self) -> float:
        return math.sqrt(self.variance)

    def with_t(self, t: float) -> "ToyConfig":
        return replace(self, t=t)

    def with_alpha(self, alpha: AlphaLike) -> "ToyConfig":
        return replace(self, alpha=as_alpha(alpha))

    def to_dict(self) -> Dict[str, Any]:
        return {
            'mean': self.mean, 'variance': self.variance, 't': self.t, 'c': self.c,
            'alpha': self.alpha.value, 'mc_samples': self.mc_samples, 'seed': self.seed
        }


@dataclass(frozen=True, eq=False)
class ToyGeometry:
    """Correlations and 2×2 covariances of (W, Z_i) and of P_W⊗P_{Z_i}."""

    rho1: float
    rho2: float
    w_variance: float
    z_variance: float
    joint_covariances: List[np.ndarray]
    product_covariance: np.ndarray

    def rho(self, i: int) -> float:
        return self.rho1 if i == 1 else self.rho2

    def joint_covariance(self, i: int) -> np.ndarray:
        return self.joint_covariances[i - 1]


@dataclass(frozen=True)
class ToySweepRow:
    """One t point of the bound sweep."""

    t: float
    gen_true: float
    gen_se: float
    bound_mi: float
    bound_js: Dict[float, float] = field(default_factory=dict)
    bound_renyi: Dict[float, float] = field(default_factory=dict)
    js_info: Dict[float, List[float]] = field(default_factory=dict)

    def values(self, alphas: List[float]) -> List[float]:
        """Row values in CSV column order."""
        return ([self.t, self.gen_true, self.gen_se, self.bound_mi]
                + [self.bound_js[a] for a in alphas]
                + [self.bound_renyi[a] for a in alphas])
