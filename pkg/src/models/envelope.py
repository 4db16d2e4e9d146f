"""CGF envelopes and sub-Gaussian parameter sets."""

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Optional, Tuple

import numpy as np

from ..exceptions import ParameterError, ValidationError

DERIVATIVE_STEP = 1e-6


@dataclass(frozen=True, eq=False)
class CgfEnvelope:
    """
    Convex upper envelope ψ(λ) of a cumulant generating function on [0, b).

    ``psi`` must accept a scalar λ in [0, domain_upper) and return ψ(λ).
    """

    psi: Callable[[float], float]
    domain_upper: float = math.inf
    name: str = "custom"
    params: Dict[str, float] = field(default_factory=dict)
    convexity_trials: int = 32

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        """Check ψ(0) = ψ'(0) = 0 and midpoint convexity."""
        if not self.domain_upper > 0:
            raise ValidationError(f"envelope domain upper end must be > 0, got {self.domain_upper}")

        psi0 = float(self.psi(0.0))
        if abs(psi0) > 1e-12:
            raise ValidationError(f"envelope must satisfy psi(0) = 0, got {psi0}")

        scale = 1.0 + abs(float(self.psi(self.reference_point)))
        slope = abs(float(self.psi(DERIVATIVE_STEP)) - psi0) / DERIVATIVE_STEP
        if slope > 1e-4 * scale:
            raise ValidationError(f"envelope must satisfy psi'(0) = 0, slope at 0 is {slope:.3e}")

        self.check_convexity()

    @property
    def reference_point(self) -> float:
        return min(1.0, 0.5 * self.domain_upper)

    def check_convexity(self, seed: int = 0) -> None:
        """Midpoint inequality at random pairs inside the domain."""
        rng = np.random.default_rng(seed)
        upper = min(self.domain_upper, 10.0) * (1.0 - 1e-6)
        points = rng.uniform(0.0, upper, size=(self.convexity_trials, 2))
        for left, right in points:
            mid = 0.5 * (left + right)
            lhs = float(self.psi(mid))
            rhs = 0.5 * (float(self.psi(left)) + float(self.psi(right)))
            if not np.isfinite(rhs):
                continue
            if lhs > rhs + 1e-9 * (1.0 + abs(rhs)):
                raise ValidationError(
                    f"envelope {self.name} is not convex between {left:.4g} and {right:.4g}"
                )

    def __call__(self, lam: float) -> float:
        return float(self.psi(lam))

    @classmethod
    def sub_gaussian(cls, sigma: float) -> "CgfEnvelope":
        """ψ(λ) = σ²λ²/2 on [0, ∞)."""
        if sigma < 0:
            raise ValidationError("sigma must be nonnegative")
        s2 = float(sigma) ** 2
        return cls(lambda lam: 0.5 * s2 * lam * lam, math.inf, "sub_gaussian", {'sigma': float(sigma)})

    @classmethod
    def sub_gamma(cls, variance: float, scale: float) -> "CgfEnvelope":
        """ψ(λ) = vλ²/(2(1−cλ)) on [0, 1/c)."""
        if variance < 0 or scale <= 0:
            raise ValidationError("sub-gamma envelope needs v >= 0 and c > 0")
        v, c = float(variance), float(scale)

        def psi(lam: float) -> float:
            denom = 1.0 - c * lam
            return math.inf if denom <= 0 else v * lam * lam / (2.0 * denom)

        return cls(psi, 1.0 / c, "sub_gamma", {'v': v, 'c': c})

    @classmethod
    def sub_exponential(cls, nu: float, scale: float) -> "CgfEnvelope":
        """ψ(λ) = ν²λ²/2 on [0, 1/b)."""
        if nu < 0 or scale <= 0:
            raise ValidationError("sub-exponential envelope needs nu >= 0 and b > 0")
        n2 = float(nu) ** 2
        return cls(lambda lam: 0.5 * n2 * lam * lam, 1.0 / float(scale), "sub_exponential",
                   {'nu': float(nu), 'b': float(scale)})

    def to_dict(self) -> Dict[str, Any]:
        return {
            'name': self.name,
            'domain_upper': "inf" if math.isinf(self.domain_upper) else self.domain_upper,
            'params': dict(self.params)
        }


@dataclass(frozen=True)
class SubGaussianParams:
    """
    Sub-Gaussian parameters of the loss under the distributions a bound routes through.

    sigma is taken under P_W⊗μ, gamma under P_{W,Z_i} and sigma_alpha under the
    α-mixture. A loss range [a, b] pins all three to (b − a)/2.
    """

    sigma: Optional[float] = None
    gamma: Optional[float] = None
    sigma_alpha: Optional[float] = None
    loss_range: Optional[Tuple[float, float]] = None

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        for name in ('sigma', 'gamma', 'sigma_alpha'):
            value = getattr(self, name)
            if value is not None and (not np.isfinite(value) or value < 0):
                raise ValidationError(f"{name} must be a finite nonnegative number, got {value!r}")

        if self.loss_range is None:
            return

        low, high = (float(x) for x in self.loss_range)
        if not low <= high:
            raise ValidationError(f"loss range must satisfy a <= b, got [{low}, {high}]")
        object.__setattr__(self, 'loss_range', (low, high))
        half = 0.5 * (high - low)
        for name in ('sigma', 'gamma', 'sigma_alpha'):
            value = getattr(self, name)
            if value is None:
                object.__setattr__(self, name, half)
            elif abs(value - half) > 1e-12:
                raise ValidationError(
                    f"{name}={value} conflicts with loss range [{low}, {high}] (expected {half})"
                )

    @classmethod
    def from_loss_range(cls, low: float, high: float) -> "SubGaussianParams":
        """Bounded loss: (b − a)/2-sub-Gaussian under every distribution."""
        return cls(loss_range=(float(low), float(high)))

    @classmethod
    def uniform(cls, sigma: float) -> "SubGaussianParams":
        return cls(sigma=sigma, gamma=sigma, sigma_alpha=sigma)

    def require(self, name: str, bound_name: str) -> float:
        """Return the named parameter or raise ParameterError."""
        value = getattr(self, name)
        if value is None:
            raise ParameterError(
                f"bound {bound_name} needs sub-Gaussian parameter {name}",
                parameter=name, bound_name=bound_name
            )
        return float(value)

    def require_range(self, bound_name: str) -> Tuple[float, float]:
        if self.loss_range is None:
            raise ParameterError(
                f"bound {bound_name} needs a loss range", parameter="loss_range", bound_name=bound_name
            )
        return self.loss_range

    @property
    def loss_magnitude(self) -> Optional[float]:
        """b in |ℓ| ≤ b for the loss range, if known."""
        if self.loss_range is None:
            return None
        return max(abs(self.loss_range[0]), abs(self.loss_range[1]))

    def to_dict(self) -> Dict[str, Any]:
        return {
            'sigma': self.sigma,
            'gamma': self.gamma,
            'sigma_alpha': self.sigma_alpha,
            'loss_range': list(self.loss_range) if self.loss_range else None
        }
