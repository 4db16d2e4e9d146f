"""Summation and extended-real helpers."""

import math
from typing import Iterable

import numpy as np

INF = math.inf


def stable_sum(terms: Iterable[float]) -> float:
    """Descending-magnitude compensated sum; +inf terms propagate."""
    values = np.asarray(list(terms) if not isinstance(terms, np.ndarray) else terms,
                        dtype=float).ravel()
    if values.size == 0:
        return 0.0
    if np.isnan(values).any():
        return math.nan
    if np.isposinf(values).any():
        return INF if not np.isneginf(values).any() else math.nan
    if np.isneginf(values).any():
        return -INF
    order = np.argsort(-np.abs(values), kind="stable")
    return math.fsum(values[order].tolist())


def is_finite(value: float) -> bool:
    """True for finite reals (extended reals are plain floats)."""
    return math.isfinite(value)
