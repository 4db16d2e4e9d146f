"""Bound reports: the rows every evaluator and the CLI hand around."""

import math
from dataclasses import dataclass, field
from typing import Any, Dict, List

import numpy as np

from ..exceptions import ValidationError


def json_number(value: Any) -> Any:
    """Render floats for strict JSON (infinities become strings)."""
    if isinstance(value, np.ndarray):
        return json_number(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value
    if isinstance(value, dict):
        return {k: json_number(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [json_number(v) for v in value]
    return value


@dataclass(frozen=True)
class BoundReport:
    """A named bound value plus the parameters that produced it."""

    bound_name: str
    value: float
    params: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        value = float(self.value)
        if math.isnan(value) or value < 0:
            raise ValidationError(f"bound {self.bound_name} has invalid value {self.value!r}")
        object.__setattr__(self, 'value', value)

    @property
    def is_finite(self) -> bool:
        return math.isfinite(self.value)

    def __add__(self, other: "BoundReport") -> "BoundReport":
        return BoundReport(
            f"{self.bound_name}+{other.bound_name}",
            self.value + other.value,
            {'terms': [self.to_dict(), other.to_dict()]}
        )

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary for JSON serialization."""
        return {
            'bound_name': self.bound_name,
            'value': json_number(self.value),
            'params': json_number(self.params)
        }


@dataclass(frozen=True)
class TightnessResult:
    """Per-sample outcome of the JS-versus-Rényi sufficient condition."""

    holds: List[bool]
    threshold: float
    alpha_js: float
    alpha_renyi: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            'holds': list(self.holds),
            'threshold': json_number(self.threshold),
            'alpha_js': self.alpha_js,
            'alpha_renyi': self.alpha_renyi
        }
