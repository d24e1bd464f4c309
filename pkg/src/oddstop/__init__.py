"""Optimal stopping on sums of odds, x-strategies for best choice, and friends."""
from .best_choice import (
    INV_E,
    XStrategy,
    optimal_success,
    optimal_wait_threshold,
    success_probability,
    threshold_gap,
)
from .errors import NumericalError, PartitionTooCoarse, ValidationError
from .odds_engine import (
    DelayedOddsProblem,
    IntensityFunction,
    OddsProblem,
    ThresholdResult,
    continuous_threshold,
    delayed_threshold,
    solve,
)

__version__ = "0.1.0"

__all__ = [
    "INV_E",
    "XStrategy",
    "optimal_success",
    "optimal_wait_threshold",
    "success_probability",
    "threshold_gap",
    "NumericalError",
    "PartitionTooCoarse",
    "ValidationError",
    "DelayedOddsProblem",
    "IntensityFunction",
    "OddsProblem",
    "ThresholdResult",
    "continuous_threshold",
    "delayed_threshold",
    "solve",
]
