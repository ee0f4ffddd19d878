"""Integral Apollonian circle packings and their number theory.

Subpackages cover exact circle geometry in the space-of-circles model,
curvature orbit enumeration, congruence and reciprocity obstructions,
binary quadratic forms, continued fractions, hyperbolic distance models,
and Schmidt arrangements, plus a command line front end (``apollon``).
"""

from apollon.errors import (
    ApollonError,
    CapExceededError,
    InconsistentSamplesError,
    InvariantViolationError,
    NotRepresentableError,
    UsageError,
)

__all__ = [
    "ApollonError",
    "CapExceededError",
    "InconsistentSamplesError",
    "InvariantViolationError",
    "NotRepresentableError",
    "UsageError",
]

__version__ = "0.1.0"
