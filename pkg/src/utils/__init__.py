"""Utility functions and classes for the genbound toolkit."""

from .logger import setup_logger, configure_logging, LoggerMixin
from .numerics import stable_sum, INF
from .parallel import parallel_map, resolve_threads
from .rng import derive_seed, stream

__all__ = [
    "setup_logger",
    "configure_logging",
    "LoggerMixin",
    "stable_sum",
    "INF",
    "parallel_map",
    "resolve_threads",
    "derive_seed",
    "stream",
]
