"""Numerical checks of symplectic and prequantum Frobenius reciprocity and of form descent."""

__version__ = "0.1.0"

from .errors import VerificationError
from .report import APPROX, FAIL, INCONCLUSIVE, PASS, CheckReport, Sampler
from .suites import SCENARIOS, SuiteConfig, run_scenario

__all__ = ["APPROX", "FAIL", "INCONCLUSIVE", "PASS", "CheckReport", "SCENARIOS", "Sampler", "SuiteConfig",
           "VerificationError", "run_scenario", "__version__"]
