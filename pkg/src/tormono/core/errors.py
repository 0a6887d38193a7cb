"""Exception hierarchy shared by all tormono modules."""

from __future__ import annotations

from typing import Optional


class TormonoError(Exception):
    """Base class for every error raised by tormono."""
    pass


class DimensionError(TormonoError, ValueError):
    """Raised for non-square input, shape mismatch or an unsupported fiber dimension."""
    pass


class DomainError(TormonoError, ValueError):
    """Raised when an operation's precondition does not hold."""
    pass


class SingularMatrixError(DomainError):
    """Raised when an exact inverse is requested for a singular matrix."""
    pass


class RegimeError(DomainError):
    """Raised when a criterion is applied outside the regime it is defined for.

    Attributes:
        regime: Short tag naming the violated regime (e.g. ``"UnprovenRegime"``)
    """

    def __init__(self, message: str, regime: Optional[str] = None):
        super().__init__(message)
        self.regime = regime


class MatrixFormatError(TormonoError, ValueError):
    """Raised when a matrix or bundle literal cannot be parsed."""
    pass


class CorpusFormatError(TormonoError, ValueError):
    """Raised when a corpus line is malformed."""
    pass


class SearchBudgetExceeded(TormonoError, RuntimeError):
    """Raised when a search that must not give up silently hits its cap."""
    pass


class CertificateError(TormonoError, AssertionError):
    """Raised when an internally produced certificate fails exact verification."""
    pass
