"""Finite probability distributions: ProbVec, JointDist and the Alpha order."""

from dataclasses import dataclass, field
from typing import Any, Dict, Hashable, Optional, Sequence, Tuple, Union

import numpy as np

from ..exceptions import AlphabetError, ValidationError

MASS_TOLERANCE = 1e-12


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=float, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class Alpha:
    """Order parameter of JS_α and R_α, strictly inside (0, 1)."""

    value: float

    def __post_init__(self):
        """Validate the order after initialization."""
        self.validate()

    def validate(self) -> None:
        value = float(self.value)
        if not np.isfinite(value) or not 0.0 < value < 1.0:
            raise ValidationError(f"alpha must lie strictly inside (0, 1), got {self.value!r}")
        object.__setattr__(self, 'value', value)

    @property
    def complement(self) -> float:
        return 1.0 - self.value

    def __float__(self) -> float:
        return self.value

    def label(self) -> str:
        """Two-decimal label used in CSV column names."""
        return f"{self.value:.2f}"


AlphaLike = Union[Alpha, float]


def as_alpha(value: AlphaLike) -> Alpha:
    """Coerce a float or Alpha to Alpha."""
    return value if isinstance(value, Alpha) else Alpha(float(value))


@dataclass(frozen=True, eq=False)
class ProbVec:
    """Finite probability distribution over an ordered atom list."""

    atoms: Tuple[Hashable, ...]
    mass: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'atoms', tuple(self.atoms))
        object.__setattr__(self, 'mass', _frozen(self.mass).ravel())
        self.validate()

    def validate(self) -> None:
        """Check masses are nonnegative and sum to one."""
        if len(self.atoms) == 0:
            raise ValidationError("ProbVec needs at least one atom")
        if len(set(self.atoms)) != len(self.atoms):
            raise ValidationError("ProbVec atoms must be distinct")
        if self.mass.shape != (len(self.atoms),):
            raise ValidationError(
                f"ProbVec has {len(self.atoms)} atoms but {self.mass.size} masses"
            )
        if not np.all(np.isfinite(self.mass)) or np.any(self.mass < 0):
            raise ValidationError("ProbVec masses must be finite and nonnegative")
        total = float(np.sum(self.mass))
        if abs(total - 1.0) > MASS_TOLERANCE:
            raise ValidationError(f"ProbVec masses sum to {total!r}, expected 1")

    @classmethod
    def from_masses(cls, masses: Sequence[float], atoms: Optional[Sequence[Hashable]] = None,
                    normalize: bool = False) -> "ProbVec":
        masses = np.asarray(masses, dtype=float)
        if normalize:
            masses = masses / masses.sum()
        if atoms is None:
            atoms = tuple(range(masses.size))
        return cls(tuple(atoms), masses)

    @classmethod
    def bernoulli(cls, p: float) -> "ProbVec":
        """Bern(p) on atoms (0, 1)."""
        return cls((0, 1), np.array([1.0 - p, p]))

    @classmethod
    def point_mass(cls, atom: Hashable, atoms: Sequence[Hashable]) -> "ProbVec":
        atoms = tuple(atoms)
        mass = np.zeros(len(atoms))
        mass[atoms.index(atom)] = 1.0
        return cls(atoms, mass)

    @classmethod
    def uniform(cls, atoms: Sequence[Hashable]) -> "ProbVec":
        atoms = tuple(atoms)
        return cls(atoms, np.full(len(atoms), 1.0 / len(atoms)))

    def __len__(self) -> int:
        return len(self.atoms)

    def support(self) -> np.ndarray:
        return self.mass > 0

    def total_variation(self, other: "ProbVec") -> float:
        check_same_alphabet(self, other)
        return 0.5 * float(np.abs(self.mass - other.mass).sum())

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary for JSON serialization."""
        return {
            'atoms': [a if isinstance(a, (int, float, str)) else str(a) for a in self.atoms],
            'mass': self.mass.tolist()
        }


@dataclass(frozen=True, eq=False)
class JointDist:
    """Joint distribution over hypotheses (rows) and samples (columns)."""

    w_atoms: Tuple[Hashable, ...]
    z_atoms: Tuple[Hashable, ...]
    mass: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'w_atoms', tuple(self.w_atoms))
        object.__setattr__(self, 'z_atoms', tuple(self.z_atoms))
        object.__setattr__(self, 'mass', _frozen(self.mass))
        self.validate()

    def validate(self) -> None:
        """Check shape, nonnegativity and total mass."""
        shape = (len(self.w_atoms), len(self.z_atoms))
        if self.mass.shape != shape:
            raise ValidationError(f"JointDist mass has shape {self.mass.shape}, expected {shape}")
        if not np.all(np.isfinite(self.mass)) or np.any(self.mass < 0):
            raise ValidationError("JointDist masses must be finite and nonnegative")
        total = float(np.sum(self.mass))
        if abs(total - 1.0) > MASS_TOLERANCE:
            raise ValidationError(f"JointDist masses sum to {total!r}, expected 1")

    @classmethod
    def from_matrix(cls, matrix, w_atoms: Optional[Sequence[Hashable]] = None,
                    z_atoms: Optional[Sequence[Hashable]] = None,
                    normalize: bool = False) -> "JointDist":
        matrix = np.asarray(matrix, dtype=float)
        if normalize:
            matrix = matrix / matrix.sum()
        if w_atoms is None:
            w_atoms = tuple(range(matrix.shape[0]))
        if z_atoms is None:
            z_atoms = tuple(range(matrix.shape[1]))
        return cls(tuple(w_atoms), tuple(z_atoms), matrix)

    @classmethod
    def independent(cls, p_w: ProbVec, p_z: ProbVec) -> "JointDist":
        """The product distribution p_w ⊗ p_z."""
        return cls(p_w.atoms, p_z.atoms, np.outer(p_w.mass, p_z.mass))

    @property
    def shape(self) -> Tuple[int, int]:
        return self.mass.shape

    def w_marginal(self) -> ProbVec:
        return ProbVec(self.w_atoms, self.mass.sum(axis=1))

    def z_marginal(self) -> ProbVec:
        return ProbVec(self.z_atoms, self.mass.sum(axis=0))

    def product(self) -> "JointDist":
        """P_W ⊗ P_Z built from this joint's own marginals."""
        return JointDist(self.w_atoms, self.z_atoms,
                         np.outer(self.mass.sum(axis=1), self.mass.sum(axis=0)))

    def alpha_mixture(self, alpha: AlphaLike) -> "JointDist":
        """α·(P_W⊗P_Z) + (1−α)·P_{W,Z}."""
        a = as_alpha(alpha).value
        return JointDist(self.w_atoms, self.z_atoms, a * self.product().mass + (1.0 - a) * self.mass)

    def geometric_mixture(self, alpha: AlphaLike) -> "JointDist":
        """Normalized (P_W⊗P_Z)^α · P_{W,Z}^(1−α)."""
        a = as_alpha(alpha).value
        with np.errstate(divide='ignore'):
            log_g = a * np.log(self.product().mass) + (1.0 - a) * np.log(self.mass)
        finite = np.isfinite(log_g)
        if not finite.any():
            raise ValidationError("product and joint are mutually singular")
        g = np.zeros_like(log_g)
        g[finite] = np.exp(log_g[finite] - log_g[finite].max())
        return JointDist(self.w_atoms, self.z_atoms, g / g.sum())

    def flatten(self) -> ProbVec:
        """View as a ProbVec over (w, z) pairs."""
        atoms = tuple((w, z) for w in self.w_atoms for z in self.z_atoms)
        return ProbVec(atoms, self.mass.ravel())

    def conditional_z_given_w(self) -> np.ndarray:
        """Row-stochastic matrix P_{Z|W}; rows with zero mass are left at zero."""
        rows = self.mass.sum(axis=1, keepdims=True)
        with np.errstate(invalid='ignore', divide='ignore'):
            cond = np.where(rows > 0, self.mass / rows, 0.0)
        return cond

    def is_independent(self, atol: float = 1e-12) -> bool:
        return bool(np.allclose(self.mass, self.product().mass, rtol=0.0, atol=atol))

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary for JSON serialization."""
        return {
            'w_atoms': [str(a) for a in self.w_atoms],
            'z_atoms': [str(a) for a in self.z_atoms],
            'mass': self.mass.tolist()
        }


Distribution = Union[ProbVec, JointDist]


def _alphabet(dist: Distribution) -> tuple:
    if isinstance(dist, JointDist):
        return (dist.w_atoms, dist.z_atoms)
    return dist.atoms


def check_same_alphabet(left: Distribution, right: Distribution) -> None:
    """Raise AlphabetError unless both distributions share their atom lists."""
    if type(left) is not type(right) or _alphabet(left) != _alphabet(right):
        raise AlphabetError(
            "distributions are defined on different alphabets",
            left=_alphabet(left), right=_alphabet(right)
        )
