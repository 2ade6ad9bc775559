"""Exception hierarchy.

Error classes map onto the CLI exit codes: validation and parse problems
exit 1, numerical failures exit 2, I/O problems exit 3.
"""


class LeadRankError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(LeadRankError, ValueError):
    """Invalid input data or parameters."""


class ParseError(ValidationError):
    """Malformed input file.

    ``line`` is the 1-based line number of the offending row, when known.
    """

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class DuplicateKeyError(ParseError):
    """Two rows describe the same key (e.g. the same date and ticker)."""


class DegenerateSeriesError(ValidationError):
    """A series is too short to analyze (fewer than 2 present observations)."""


class InsufficientOverlapError(ValidationError):
    """Two series do not overlap on enough periods for the requested lags."""


class DegenerateVarianceError(ValidationError):
    """A correlation window has zero variance."""


class NoValidLagError(ValidationError):
    """Every candidate lag produced a degenerate correlation window."""


class JoinError(ValidationError):
    """Two keyed collections do not match 1:1 on their keys."""


class NumericalError(LeadRankError):
    """Base class for numerical failures (CLI exit code 2)."""


class NonConvergenceError(NumericalError):
    """Iteration budget exhausted before the tolerance was met.

    Carries the last iterate and the final max-norm step so callers can
    inspect how close the run got.
    """

    def __init__(self, message: str, last_scores=None, residual: float | None = None,
                 n_iter: int | None = None):
        super().__init__(message)
        self.last_scores = last_scores
        self.residual = residual
        self.n_iter = n_iter


class SolveError(NumericalError):
    """A linear system was singular or produced non-finite values."""


class StageError(LeadRankError):
    """A pipeline stage failed; wraps the underlying cause."""

    def __init__(self, stage: str, cause: BaseException):
        super().__init__(f"stage '{stage}': {cause}")
        self.stage = stage
        self.cause = cause
