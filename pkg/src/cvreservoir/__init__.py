"""Two-mode Gaussian entanglement under structured non-Markovian reservoirs."""

__version__ = "0.1.0"

from .errors import (
    ConvergenceError,
    DomainError,
    EvaluationError,
    GridError,
    NumericalError,
    ReservoirError,
    ThresholdError,
    UsageError,
)
from .spectral import BoseEinstein, Family, HighT, ReservoirSpec, ZeroT
from .gaussian import CovMatrix, TwbParams, eof_symmetric, twb_covariance
from .dynamics import detect_events, disentanglement_time, run_trajectory, sweep

__all__ = [
    "__version__",
    "ConvergenceError",
    "DomainError",
    "EvaluationError",
    "GridError",
    "NumericalError",
    "ReservoirError",
    "ThresholdError",
    "UsageError",
    "BoseEinstein",
    "Family",
    "HighT",
    "ReservoirSpec",
    "ZeroT",
    "CovMatrix",
    "TwbParams",
    "eof_symmetric",
    "twb_covariance",
    "detect_events",
    "disentanglement_time",
    "run_trajectory",
    "sweep",
]
