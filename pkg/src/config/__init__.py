"""Configuration package for the genbound toolkit."""

from .settings import AppConfig, NumericsConfig, SolverConfig, MonteCarloConfig, RuntimeConfig, get_config

__all__ = ["AppConfig", "NumericsConfig", "SolverConfig", "MonteCarloConfig", "RuntimeConfig", "get_config"]
