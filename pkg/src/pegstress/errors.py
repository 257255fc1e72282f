"""Exception hierarchy.

Everything the library rejects on purpose derives from :class:`ValidationError`
so callers (and the CLI) can distinguish bad inputs (exit code 1) from genuine
I/O failures (``OSError``, exit code 2).
"""


class ValidationError(ValueError):
    """An input violates a documented precondition or type invariant."""


class ParseError(ValidationError):
    """A CSV row or header could not be parsed.

    Attributes:
        line_number: 1-based line in the source file, when known.
    """

    def __init__(self, message: str, line_number: int | None = None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class GapError(ValidationError):
    """A time-series gap exceeds what the ingest policy allows."""


class AlignmentError(ValidationError):
    """Two series do not share a common time window or grid."""


class StabilityError(ValidationError):
    """A queueing system is unstable (offered load >= capacity)."""


class ScenarioSpecError(ValidationError):
    """A synthetic scenario specification is infeasible."""
