"""Configuration management for the genbound toolkit."""

import os
from dataclasses import dataclass
from typing import Optional

from dotenv import load_dotenv


@dataclass
class NumericsConfig:
    """Tolerances and guards shared by the exact computations."""

    identity_tolerance: float = 1e-9
    enumeration_limit: int = 1_000_000
    legendre_grid_points: int = 64
    golden_section_tolerance: float = 1e-10


@dataclass
class SolverConfig:
    """Configuration for the simplex mirror-descent solver."""

    gradient_tolerance: float = 1e-8
    max_iterations: int = 100_000
    mass_floor: float = 1e-300
    armijo_shrink: float = 0.5
    initial_step: float = 1.0
    stationary_finish: bool = True


@dataclass
class MonteCarloConfig:
    """Configuration for Monte Carlo and quadrature estimators."""

    default_samples: int = 1_000_000
    hermite_nodes: int = 64
    entropy_method: str = "mc"  # "mc" or "quadrature"
    quadrature_tolerance: float = 1e-6


@dataclass
class RuntimeConfig:
    """Process-level settings: parallelism and logging."""

    threads: int = 0  # 0 = auto
    log_level: str = "WARNING"
    structured_logging: bool = False
    log_file: Optional[str] = None


@dataclass
class AppConfig:
    """Main application configuration."""

    debug: bool = False

    numerics: NumericsConfig = None
    solver: SolverConfig = None
    monte_carlo: MonteCarloConfig = None
    runtime: RuntimeConfig = None

    # Output schema versions
    sweep_schema: str = "genbound.sweep/1"
    report_schema: str = "genbound.report/1"

    def __post_init__(self):
        """Initialize nested configs and apply environment overrides."""
        if self.numerics is None:
            self.numerics = NumericsConfig()
        if self.solver is None:
            self.solver = SolverConfig()
        if self.monte_carlo is None:
            self.monte_carlo = MonteCarloConfig()
        if self.runtime is None:
            self.runtime = RuntimeConfig()

        self._load_from_environment()

    def _load_from_environment(self):
        """Load configuration from environment variables."""
        self.debug = os.getenv("GENBOUND_DEBUG", "false").lower() == "true"

        # Runtime
        self.runtime.threads = int(os.getenv("GENBOUND_THREADS", self.runtime.threads))
        self.runtime.log_level = os.getenv("GENBOUND_LOG_LEVEL", self.runtime.log_level)
        self.runtime.structured_logging = (
            os.getenv("GENBOUND_STRUCTURED_LOGS", str(self.runtime.structured_logging)).lower() == "true"
        )
        self.runtime.log_file = os.getenv("GENBOUND_LOG_FILE", self.runtime.log_file)
        if self.debug:
            self.runtime.log_level = "DEBUG"

        # Monte Carlo
        self.monte_carlo.default_samples = int(
            os.getenv("GENBOUND_MC_SAMPLES", self.monte_carlo.default_samples)
        )
        self.monte_carlo.entropy_method = os.getenv(
            "GENBOUND_ENTROPY_METHOD", self.monte_carlo.entropy_method
        )

        # Solver
        self.solver.max_iterations = int(
            os.getenv("GENBOUND_SOLVER_MAX_ITER", self.solver.max_iterations)
        )

        if self.runtime.threads < 0:
            raise ValueError("GENBOUND_THREADS must be >= 0 (0 = auto)")
        if self.monte_carlo.entropy_method not in ("mc", "quadrature"):
            raise ValueError("GENBOUND_ENTROPY_METHOD must be 'mc' or 'quadrature'")


def get_config() -> AppConfig:
    """Get the application configuration instance."""
    load_dotenv(override=False)
    return AppConfig()
