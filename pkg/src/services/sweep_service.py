"""Gaussian mean-estimation bound sweep."""

from typing import List, Optional, Sequence

from ..config.settings import AppConfig
from ..core import gaussian
from ..models.toy import ToyConfig, ToySweepRow
from ..utils import LoggerMixin


class SweepService(LoggerMixin):
    """Runs the t sweep of true generalization error against MI, JS and Rényi bounds."""

    def __init__(self, config: Optional[AppConfig] = None):
        self.config = config or AppConfig()

    def run(self, base: ToyConfig, t_grid: Optional[Sequence[float]] = None,
            alphas: Sequence[float] = (0.25, 0.5, 0.75),
            method: Optional[str] = None, threads: Optional[int] = None) -> List[ToySweepRow]:
        """
        Evaluate every t point.

        Raises:
            ValidationError: If a t value is outside (0, 0.5]
            NumericalAccuracyError: If quadrature misses its tolerance
        """
        method = method or self.config.monte_carlo.entropy_method
        threads = self.config.runtime.threads if threads is None else threads
        t_grid = gaussian.default_t_grid() if t_grid is None else list(t_grid)

        with self.log_operation("sweep", t_points=len(t_grid), seed=base.seed):
            rows = gaussian.toy_sweep(
                base, t_grid, alphas, method, threads,
                nodes=self.config.monte_carlo.hermite_nodes,
                tolerance=self.config.monte_carlo.quadrature_tolerance
            )

        unsound = [
            row.t for row in rows
            if min([row.bound_mi, *row.bound_js.values(), *row.bound_renyi.values()])
            < row.gen_true - 3.0 * row.gen_se
        ]
        if unsound:
            self.logger.warning(f"Bounds below true generalization error at t = {unsound}")
        return rows

    @staticmethod
    def crossover(rows: List[ToySweepRow], alpha: float) -> Optional[float]:
        """First t at which the MI bound drops below the JS(α) bound, if any."""
        for row in rows:
            if row.bound_mi < row.bound_js[alpha]:
                return row.t
        return None
