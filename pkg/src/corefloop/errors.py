"""Exception hierarchy shared across the engine.

Validation errors mean the input data violates the documented formats or
invariants (the CLI maps them to exit code 2); everything else raised by
the engine is a runtime error (exit code 1).
"""


class CorefLoopError(Exception):
    """Base class for engine errors."""


class ValidationError(CorefLoopError):
    """Input data violates a documented format or invariant."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class StoreError(CorefLoopError):
    """Illegal cluster-store operation (unknown cluster, double merge, ...)."""


class ScoreLookupError(CorefLoopError):
    """A pairwise score was requested for a pair the matrix does not cover."""
