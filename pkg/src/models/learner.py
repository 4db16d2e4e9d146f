"""Finite learner instances, learning kernels and their exact enumeration."""

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Hashable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from ..exceptions import EnumerationSizeError, InstanceFormatError, ValidationError
from .distributions import Alpha, JointDist, ProbVec, as_alpha
from .report import json_number

DEFAULT_ENUMERATION_LIMIT = 1_000_000

Dataset = Tuple[int, ...]


@dataclass(frozen=True, eq=False)
class LearnerInstance:
    """
    Finite learning problem: data law μ over z_atoms, loss table ℓ(w, z),
    sample count n, inverse temperature β and a full-support prior over w_atoms.

    Datasets are tuples of z indices, enumerated in lexicographic order.
    """

    mu: ProbVec
    w_atoms: Tuple[Hashable, ...]
    loss: np.ndarray
    n: int = 1
    beta: float = 1.0
    prior: Optional[ProbVec] = None

    def __post_init__(self):
        object.__setattr__(self, 'w_atoms', tuple(self.w_atoms))
        loss = np.array(self.loss, dtype=float, copy=True)
        loss.setflags(write=False)
        object.__setattr__(self, 'loss', loss)
        if self.prior is None:
            object.__setattr__(self, 'prior', ProbVec.uniform(self.w_atoms))
        self.validate()

    def validate(self) -> None:
        """Check shapes, finiteness and prior support."""
        shape = (len(self.w_atoms), len(self.mu))
        if self.loss.shape != shape:
            raise ValidationError(f"loss table has shape {self.loss.shape}, expected {shape}")
        if not np.all(np.isfinite(self.loss)):
            raise ValidationError("loss table must be finite")
        if int(self.n) != self.n or self.n < 1:
            raise ValidationError(f"n must be a positive integer, got {self.n!r}")
        object.__setattr__(self, 'n', int(self.n))
        if not np.isfinite(self.beta) or self.beta < 0:
            raise ValidationError(f"beta must be finite and nonnegative, got {self.beta!r}")
        if self.prior.atoms != self.w_atoms:
            raise ValidationError("prior must be defined on w_atoms")
        if np.any(self.prior.mass <= 0):
            raise ValidationError("prior must have full support")

    @property
    def z_atoms(self) -> Tuple[Hashable, ...]:
        return self.mu.atoms

    @property
    def n_w(self) -> int:
        return len(self.w_atoms)

    @property
    def n_z(self) -> int:
        return len(self.mu)

    @property
    def dataset_count(self) -> int:
        return self.n_z ** self.n

    def check_enumerable(self, limit: int = DEFAULT_ENUMERATION_LIMIT) -> None:
        if self.dataset_count > limit:
            raise EnumerationSizeError(
                f"{self.n_z}^{self.n} = {self.dataset_count} datasets exceed the limit {limit}",
                size=self.dataset_count, limit=limit
            )

    def dataset_matrix(self) -> np.ndarray:
        """All datasets as a (|Z|^n, n) index matrix in lexicographic order."""
        flat = np.arange(self.dataset_count)
        return np.stack(np.unravel_index(flat, (self.n_z,) * self.n), axis=1)

    def datasets(self) -> Iterator[Dataset]:
        for row in self.dataset_matrix():
            yield tuple(int(z) for z in row)

    def dataset_index(self, dataset: Sequence[int]) -> int:
        return int(np.ravel_multi_index(tuple(dataset), (self.n_z,) * self.n))

    def dataset_probabilities(self, datasets: Optional[np.ndarray] = None) -> np.ndarray:
        """μ^n of every dataset row."""
        datasets = self.dataset_matrix() if datasets is None else datasets
        return np.prod(self.mu.mass[datasets], axis=1)

    def empirical_risk(self, dataset: Sequence[int]) -> np.ndarray:
        """L_E(w, s) for every hypothesis."""
        return self.loss[:, list(dataset)].mean(axis=1)

    def empirical_risks(self, datasets: Optional[np.ndarray] = None) -> np.ndarray:
        """(datasets, |W|) table of empirical risks."""
        datasets = self.dataset_matrix() if datasets is None else datasets
        return self.loss[:, datasets].mean(axis=2).T

    def population_risk(self) -> np.ndarray:
        """L_μ(w) for every hypothesis."""
        return self.loss @ self.mu.mass

    @property
    def loss_range(self) -> Tuple[float, float]:
        return float(self.loss.min()), float(self.loss.max())

    def with_beta(self, beta: float) -> "LearnerInstance":
        return LearnerInstance(self.mu, self.w_atoms, self.loss, self.n, beta, self.prior)

    def with_n(self, n: int) -> "LearnerInstance":
        return LearnerInstance(self.mu, self.w_atoms, self.loss, n, self.beta, self.prior)

    @classmethod
    def from_dict(cls, data: Dict[str, Any], path: Optional[str] = None) -> "LearnerInstance":
        """Build an instance from its JSON form, reporting the offending field."""
        if not isinstance(data, dict):
            raise InstanceFormatError("instance must be a JSON object", path=path)

        def field_value(name: str, default: Any = None, required: bool = True) -> Any:
            if name not in data:
                if required:
                    raise InstanceFormatError(f"missing field '{name}'", path=path, field_name=name)
                return default
            return data[name]

        try:
            loss = np.asarray(field_value('loss'), dtype=float)
        except (TypeError, ValueError):
            raise InstanceFormatError("loss must be a numeric matrix", path=path, field_name='loss')
        if loss.ndim != 2:
            raise InstanceFormatError("loss must be a matrix", path=path, field_name='loss')

        w_atoms = field_value('w_atoms', list(range(loss.shape[0])), required=False)
        z_atoms = field_value('z_atoms', list(range(loss.shape[1])), required=False)

        try:
            mu = ProbVec.from_masses(field_value('mu'), atoms=z_atoms)
        except (TypeError, ValueError) as e:
            raise InstanceFormatError(f"invalid mu: {e}", path=path, field_name='mu')

        prior_masses = field_value('prior', None, required=False)
        try:
            prior = None if prior_masses is None else ProbVec.from_masses(prior_masses, atoms=w_atoms)
        except (TypeError, ValueError) as e:
            raise InstanceFormatError(f"invalid prior: {e}", path=path, field_name='prior')

        n = field_value('n')
        integral = isinstance(n, int) or (isinstance(n, float) and n.is_integer())
        if isinstance(n, bool) or not integral or n < 1:
            raise InstanceFormatError(f"n must be a positive integer, got {n!r}", path=path, field_name='n')
        beta = field_value('beta')
        if isinstance(beta, bool) or not isinstance(beta, (int, float)):
            raise InstanceFormatError(f"beta must be a number, got {beta!r}", path=path, field_name='beta')

        try:
            return cls(mu=mu, w_atoms=tuple(w_atoms), loss=loss, n=n, beta=float(beta), prior=prior)
        except (TypeError, ValueError) as e:
            raise InstanceFormatError(f"invalid instance: {e}", path=path)

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary for JSON serialization."""
        return {
            'w_atoms': json_number(list(self.w_atoms)),
            'z_atoms': json_number(list(self.z_atoms)),
            'mu': self.mu.mass.tolist(),
            'loss': self.loss.tolist(),
            'n': self.n,
            'beta': self.beta,
            'prior': self.prior.mass.tolist()
        }


@dataclass(frozen=True, eq=False)
class LearningKernel:
    """
    P_{W|S} as a table: one posterior row per dataset, datasets in
    lexicographic order. Solver kernels also carry per-dataset certificates.
    """

    w_atoms: Tuple[Hashable, ...]
    table: np.ndarray
    certificates: Optional[np.ndarray] = None
    iterations: Optional[np.ndarray] = None
    label: str = "kernel"

    def __post_init__(self):
        object.__setattr__(self, 'w_atoms', tuple(self.w_atoms))
        table = np.array(self.table, dtype=float, copy=True)
        table.setflags(write=False)
        object.__setattr__(self, 'table', table)
        self.validate()

    def validate(self) -> None:
        if self.table.ndim != 2 or self.table.shape[1] != len(self.w_atoms):
            raise ValidationError(f"kernel table has shape {self.table.shape}")
        if np.any(self.table < 0) or not np.all(np.isfinite(self.table)):
            raise ValidationError("kernel rows must be finite and nonnegative")
        row_error = np.max(np.abs(self.table.sum(axis=1) - 1.0))
        if row_error > 1e-9:
            raise ValidationError(f"kernel rows must sum to one (max error {row_error:.3e})")

    @classmethod
    def from_function(cls, instance: LearnerInstance,
                      posterior: Callable[[Dataset], Any], label: str = "kernel") -> "LearningKernel":
        rows = []
        for dataset in instance.datasets():
            row = posterior(dataset)
            rows.append(row.mass if isinstance(row, ProbVec) else np.asarray(row, dtype=float))
        return cls(instance.w_atoms, np.array(rows), label=label)

    @classmethod
    def constant(cls, instance: LearnerInstance, p_w: ProbVec, label: str = "constant") -> "LearningKernel":
        """Data-independent kernel returning p_w for every dataset."""
        return cls(instance.w_atoms, np.tile(p_w.mass, (instance.dataset_count, 1)), label=label)

    def posterior(self, index: int) -> ProbVec:
        return ProbVec(self.w_atoms, self.table[index])

    @property
    def max_certificate(self) -> Optional[float]:
        if self.certificates is None:
            return None
        return float(np.max(self.certificates))


@dataclass(frozen=True)
class ExcessBoundParams:
    """Inputs of the excess-risk bound evaluators."""

    b: float
    lip: float
    d: int
    beta: float
    n: int
    w_star_norm_sq: float
    alpha: Alpha
    info: List[float] = field(default_factory=list)

    def __post_init__(self):
        object.__setattr__(self, 'alpha', as_alpha(self.alpha))
        object.__setattr__(self, 'info', [float(x) for x in self.info])
        self.validate()

    def validate(self) -> None:
        for name in ('b', 'lip', 'beta', 'w_star_norm_sq'):
            value = getattr(self, name)
            if not np.isfinite(value) or value < 0:
                raise ValidationError(f"{name} must be finite and nonnegative, got {value!r}")
        if self.beta <= 0:
            raise ValidationError("beta must be positive")
        if int(self.d) != self.d or self.d < 1:
            raise ValidationError("d must be a positive integer")
        if int(self.n) != self.n or self.n < 1:
            raise ValidationError("n must be a positive integer")
        if any(x < 0 or math.isnan(x) for x in self.info):
            raise ValidationError("information values must be nonnegative")

    def to_dict(self) -> Dict[str, Any]:
        return {
            'b': self.b, 'lip': self.lip, 'd': self.d, 'beta': self.beta, 'n': self.n,
            'w_star_norm_sq': self.w_star_norm_sq, 'alpha': self.alpha.value,
            'info': list(self.info)
        }


@dataclass(frozen=True, eq=False)
class EnumeratedLearner:
    """Exact per-sample joints and generalization error of a kernel."""

    instance: LearnerInstance
    kernel: LearningKernel
    per_sample_joints: List[JointDist]
    exact_gen: float
    exact_gen_by_samples: float

    @property
    def route_gap(self) -> float:
        return abs(self.exact_gen - self.exact_gen_by_samples)

    @property
    def p_w(self) -> ProbVec:
        return self.per_sample_joints[0].w_marginal()

    def to_dict(self) -> Dict[str, Any]:
        return {
            'instance': self.instance.to_dict(),
            'kernel': self.kernel.table.tolist(),
            'per_sample_joints': [j.mass.tolist() for j in self.per_sample_joints],
            'exact_gen': self.exact_gen,
            'exact_gen_by_samples': self.exact_gen_by_samples
        }
