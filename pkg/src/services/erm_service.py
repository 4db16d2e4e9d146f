"""Regularized ERM on a finite learner instance."""

import json
from pathlib import Path
from typing import Any, Dict, Optional

from ..config.settings import AppConfig
from ..core import adm, erm, measures, oracle
from ..exceptions import InstanceFormatError
from ..models.envelope import SubGaussianParams
from ..models.kinds import InfoKind
from ..models.learner import LearnerInstance
from ..utils import LoggerMixin


class ERMService(LoggerMixin):
    """Solves the JS- or Rényi-regularized posterior for every dataset and scores it."""

    def __init__(self, config: Optional[AppConfig] = None):
        self.config = config or AppConfig()

    def load_instance(self, path: str) -> LearnerInstance:
        """
        Read a learner instance from a JSON file.

        Raises:
            InstanceFormatError: If the file is missing, not JSON, or has bad fields
        """
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except OSError as e:
            raise InstanceFormatError(f"Cannot read instance file: {e}", path=path)
        except json.JSONDecodeError as e:
            raise InstanceFormatError(f"Instance file is not valid JSON: {e}", path=path)
        if not isinstance(data, dict):
            raise InstanceFormatError("Instance file must hold a JSON object", path=path)

        instance = LearnerInstance.from_dict(data, path=path)
        self.logger.info(f"Loaded instance {path}: |W|={instance.n_w}, |Z|={instance.n_z}, n={instance.n}")
        return instance

    def run(self, instance: LearnerInstance, reg: str = "js", alpha: float = 0.5,
            threads: Optional[int] = None) -> Dict[str, Any]:
        """
        Solve every dataset, then report posteriors, certificates, exact excess
        risk and generalization error, and the information bounds of the result.

        Raises:
            ConvergenceError: If any dataset misses the certificate tolerance
            EnumerationSizeError: If |Z|^n exceeds the enumeration limit
        """
        regularizer = erm.Regularizer.of(reg, alpha)
        threads = self.config.runtime.threads if threads is None else threads
        limit = self.config.numerics.enumeration_limit

        with self.log_operation("erm", reg=regularizer.label(), n=instance.n):
            kernel = erm.regularized_kernel(instance, regularizer, self.config.solver, threads, limit)
            gibbs = erm.gibbs_kernel(instance, limit)
            learner = oracle.enumerate_learner(instance, kernel, limit)

        self.logger.log_solver_result(
            regularizer.label(), int(kernel.iterations.max()), kernel.max_certificate, True
        )

        sg = SubGaussianParams.from_loss_range(*instance.loss_range)
        bounds = {}
        for kind in (InfoKind.mi(), InfoKind.js(alpha), InfoKind.renyi(alpha)):
            info = [measures.info_measure(j, kind) for j in learner.per_sample_joints]
            bounds[kind.label()] = {'information': info, 'bound': adm.gen_bound(info, kind, sg).value}

        posteriors = []
        for index, dataset in enumerate(instance.datasets()):
            row = kernel.table[index]
            posteriors.append({
                'dataset': [instance.z_atoms[k] for k in dataset],
                'posterior': row.tolist(),
                'certificate': float(kernel.certificates[index]),
                'iterations': int(kernel.iterations[index]),
                'boundary_mass': float(row.min())
            })

        return {
            'regularizer': regularizer.label(),
            'instance': instance.to_dict(),
            'max_certificate': kernel.max_certificate,
            'posteriors': posteriors,
            'excess_risk': erm.excess_risk_exact(instance, kernel, limit),
            'excess_risk_gibbs': erm.excess_risk_exact(instance, gibbs, limit),
            'exact_gen': learner.exact_gen,
            'gen_bounds': bounds
        }
