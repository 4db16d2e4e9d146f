"""Service layer for the genbound toolkit."""

from .erm_service import ERMService
from .export_service import ExportService
from .rate_service import RateService, SlopeFit
from .sweep_service import SweepService
from .verification_service import SuiteResult, VerificationService

__all__ = [
    "ERMService",
    "ExportService",
    "RateService",
    "SlopeFit",
    "SweepService",
    "SuiteResult",
    "VerificationService"
]
