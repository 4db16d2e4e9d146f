"""Brute-force minimization on the probability simplex.

Used as an oracle: a full grid scan followed by Nelder-Mead refinement in
softmax coordinates starting from the best grid point.
"""

from typing import Callable, Tuple

import numpy as np
from scipy.optimize import minimize
from scipy.special import softmax


def simplex_grid(dim: int, step: float) -> np.ndarray:
    """All points of the (dim−1)-simplex whose coordinates are multiples of ``step``."""
    steps = int(round(1.0 / step))
    if dim == 1:
        return np.ones((1, 1))
    if dim == 2:
        first = np.arange(steps + 1) / steps
        return np.stack([first, 1.0 - first], axis=1)
    if dim == 3:
        i, j = np.meshgrid(np.arange(steps + 1), np.arange(steps + 1), indexing="ij")
        keep = i + j <= steps
        i, j = i[keep], j[keep]
        return np.stack([i, j, steps - i - j], axis=1) / steps
    raise ValueError("grid scan supports at most three coordinates")


def refine_on_simplex(objective: Callable[[np.ndarray], float], start: np.ndarray,
                      tolerance: float = 1e-13, max_iterations: int = 20_000) -> Tuple[np.ndarray, float]:
    """Nelder-Mead on softmax logits anchored at ``start``."""
    start = np.clip(np.asarray(start, dtype=float), 1e-12, None)
    logits0 = np.log(start / start.sum())

    def wrapped(logits: np.ndarray) -> float:
        value = objective(softmax(logits))
        return value if np.isfinite(value) else 1e300

    result = minimize(
        wrapped, logits0, method="Nelder-Mead",
        options={'xatol': tolerance, 'fatol': tolerance, 'maxiter': max_iterations,
                 'maxfev': 4 * max_iterations}
    )
    point = softmax(result.x)
    value = objective(point)
    start_value = objective(start / start.sum())
    if start_value < value:
        return start / start.sum(), start_value
    return point, value


def grid_minimize(batch_objective: Callable[[np.ndarray], np.ndarray],
                  objective: Callable[[np.ndarray], float],
                  dim: int, step: float = 1e-3) -> Tuple[np.ndarray, float]:
    """
    Minimize over the simplex by grid scan plus local refinement.

    ``batch_objective`` evaluates a (points, dim) array at once;
    ``objective`` evaluates a single point.
    """
    grid = simplex_grid(dim, step)
    values = batch_objective(grid)
    best = grid[int(np.nanargmin(values))]
    return refine_on_simplex(objective, best)
