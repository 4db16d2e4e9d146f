"""Information-measure kinds, optionally parameterized by an order α."""

import re
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from ..exceptions import ValidationError
from .distributions import Alpha, AlphaLike, as_alpha


class Measure(Enum):
    """Information measures and the bound families built on them."""
    MI = "mi"
    LAUTUM = "lautum"
    JS = "js"
    RENYI = "renyi"
    SIBSON = "sibson"
    PINSKER_RENYI = "pinsker_renyi"

    @property
    def needs_alpha(self) -> bool:
        return self in (Measure.JS, Measure.RENYI, Measure.SIBSON, Measure.PINSKER_RENYI)


_KIND_PATTERN = re.compile(r"^\s*([a-z_]+)\s*(?:\(\s*([0-9.eE+-]+)\s*\))?\s*$")


@dataclass(frozen=True)
class InfoKind:
    """A measure together with its order, e.g. JS(0.5)."""

    measure: Measure
    alpha: Optional[Alpha] = None

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        if self.measure.needs_alpha and self.alpha is None:
            raise ValidationError(f"{self.measure.value} requires an alpha")
        if not self.measure.needs_alpha and self.alpha is not None:
            raise ValidationError(f"{self.measure.value} takes no alpha")

    @classmethod
    def mi(cls) -> "InfoKind":
        return cls(Measure.MI)

    @classmethod
    def lautum(cls) -> "InfoKind":
        return cls(Measure.LAUTUM)

    @classmethod
    def js(cls, alpha: AlphaLike) -> "InfoKind":
        return cls(Measure.JS, as_alpha(alpha))

    @classmethod
    def renyi(cls, alpha: AlphaLike) -> "InfoKind":
        return cls(Measure.RENYI, as_alpha(alpha))

    @classmethod
    def sibson(cls, alpha: AlphaLike) -> "InfoKind":
        return cls(Measure.SIBSON, as_alpha(alpha))

    @classmethod
    def pinsker_renyi(cls, alpha: AlphaLike) -> "InfoKind":
        return cls(Measure.PINSKER_RENYI, as_alpha(alpha))

    @classmethod
    def parse(cls, text: str) -> "InfoKind":
        """Parse labels such as ``mi``, ``lautum`` or ``js(0.5)``."""
        match = _KIND_PATTERN.match(text.lower())
        if not match:
            raise ValidationError(f"cannot parse information kind {text!r}")
        name, alpha = match.groups()
        try:
            measure = Measure(name)
        except ValueError:
            raise ValidationError(f"unknown information kind {name!r}")
        if alpha is None:
            return cls(measure)
        try:
            return cls(measure, Alpha(float(alpha)))
        except ValueError as e:
            raise ValidationError(f"invalid alpha in {text!r}: {e}")

    @property
    def alpha_value(self) -> float:
        if self.alpha is None:
            raise ValidationError(f"{self.measure.value} has no alpha")
        return self.alpha.value

    def label(self) -> str:
        if self.alpha is None:
            return self.measure.value
        return f"{self.measure.value}({self.alpha.label()})"

    def __str__(self) -> str:
        return self.label()
