"""Pure numerical core: measures, bounds, the Gaussian case study, ERM and oracles."""

from . import adm, erm, gaussian, measures, oracle

__all__ = ["adm", "erm", "gaussian", "measures", "oracle"]
