"""Value types for the genbound toolkit."""

from .distributions import Alpha, JointDist, ProbVec, as_alpha, check_same_alphabet
from .envelope import CgfEnvelope, SubGaussianParams
from .kinds import InfoKind, Measure
from .learner import EnumeratedLearner, ExcessBoundParams, LearnerInstance, LearningKernel
from .report import BoundReport, TightnessResult
from .run import RunConfig
from .toy import ToyConfig, ToyGeometry, ToySweepRow

__all__ = [
    "Alpha", "JointDist", "ProbVec", "as_alpha", "check_same_alphabet",
    "CgfEnvelope", "SubGaussianParams",
    "InfoKind", "Measure",
    "EnumeratedLearner", "ExcessBoundParams", "LearnerInstance", "LearningKernel",
    "BoundReport", "TightnessResult",
    "RunConfig",
    "ToyConfig", "ToyGeometry", "ToySweepRow",
]
