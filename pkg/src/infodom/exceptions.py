# infodom/exceptions.py
# Copyright 2025 Infodom Team
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#     http://www.apache.org/licenses/LICENSE-2.0

"""
This module defines all custom exception types for the infodom project.
"""

from typing import Optional


class InfodomError(Exception):
    """Base exception class for all infodom custom errors.

    All project-specific exceptions inherit from this class, allowing
    users to catch only this base exception to handle all known errors.
    """
    pass

# ---------- Probability primitives ----------

class ProbabilityError(InfodomError, ValueError):
    """Base exception for malformed probability mass functions.

    Inherits from ``ValueError`` for semantic compatibility.
    """
    pass

class NotNormalizedError(ProbabilityError):
    """Raised when pmf weights do not sum to exactly one."""
    pass

class NegativeWeightError(ProbabilityError):
    """Raised when a pmf atom carries a negative weight."""
    pass

class EmptySupportError(ProbabilityError):
    """Raised when a pmf has no atom with positive weight."""
    pass

class ZeroProbabilityEventError(ProbabilityError):
    """Raised when conditioning on an event of probability zero."""
    pass

# ---------- Shapes and indices ----------

class DimensionMismatchError(InfodomError, ValueError):
    """Raised when beliefs or distributions live on different state spaces."""
    pass

class WrongDimensionError(DimensionMismatchError):
    """Raised when an operation restricted to one dimension gets another."""
    pass

class HorizonMismatchError(InfodomError, ValueError):
    """Raised when two objects compared period by period have different horizons."""
    pass

class PeriodOutOfRangeError(InfodomError, ValueError):
    """Raised when a period index falls outside ``1..T``."""
    pass

class LengthMismatchError(InfodomError, ValueError):
    """Raised when a per-period list does not match its weighting."""
    pass

class PriorNotInteriorError(InfodomError, ValueError):
    """Raised when a prior does not have full support."""
    pass

# ---------- Orders and splittings ----------

class SplittingError(InfodomError, ValueError):
    """Base exception for binary splitting errors."""
    pass

class InvalidSplitError(SplittingError):
    """Raised when a splitting violates ``z1 < y2 < z3`` or the mean identity."""
    pass

class InsufficientMassError(SplittingError):
    """Raised when the split point holds less mass than the splitting moves."""
    pass

class NotAnMpsError(SplittingError):
    """Raised when the target lottery is not a mean-preserving spread of the source."""
    pass

# ---------- Dominance queries ----------

class EmptyFamilyError(InfodomError, ValueError):
    """Raised when a discount-family sweep receives no sequences."""
    pass

class TrivialExperimentError(InfodomError, ValueError):
    """Raised when a static experiment never moves the prior."""
    pass

class BetaNotDecreasingError(InfodomError, ValueError):
    """Raised when a check that requires a decreasing discount sequence gets another."""
    pass

class CounterexampleNotFoundError(InfodomError):
    """Raised when a counterexample search exhausts its grid."""
    pass

class InstanceTooLargeError(InfodomError):
    """Raised when the brute-force strategy oracle would exceed its guard."""
    pass

class CertificateError(InfodomError):
    """Raised when a produced certificate fails independent re-verification.

    This signals an internal error: the library never returns an
    unsound certificate.
    """
    pass

# ---------- Inputs and configuration ----------

class ConfigError(InfodomError):
    """Raised when a configuration item is missing or has an invalid format."""
    pass

class InputFormatError(InfodomError, ValueError):
    """Raised when an input document cannot be parsed or validated.

    Attributes:
        path: File the document was read from, if any.
        field: Dotted field name that failed, if known.
    """

    def __init__(self, message: str, path: Optional[str] = None, field: Optional[str] = None):
        self.message = message
        self.path = path
        self.field = field
        where = ", ".join(p for p in (
            f"file {path}" if path else "",
            f"field '{field}'" if field else "",
        ) if p)
        super().__init__(f"{message} ({where})" if where else message)
