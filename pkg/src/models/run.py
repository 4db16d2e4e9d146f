"""Validated command invocation."""

from dataclasses import dataclass, field
from typing import Any, Dict, Optional

from ..exceptions import ValidationError

COMMANDS = ("measure", "sweep", "verify", "erm", "rate")


@dataclass
class RunConfig:
    """A parsed CLI command with its validated parameters."""

    command: str
    parameters: Dict[str, Any] = field(default_factory=dict)
    seed: int = 42
    output: Optional[str] = None

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise ValidationError(f"unknown command {self.command!r}")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise ValidationError("seed must be a 64-bit unsigned integer")

    def to_dict(self) -> Dict[str, Any]:
        return {
            'command': self.command,
            'parameters': dict(self.parameters),
            'seed': self.seed,
            'output': self.output
        }
