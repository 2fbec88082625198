"""Exception hierarchy shared across the package.

Exit-code mapping used by the CLI:
  input problems (TaskError, ValidationError, RingMismatchError,
  AmbientMismatchError) -> 2, failed checks -> 1, InternalError -> 3.
"""


class ReeshomError(Exception):
    """Base class for all package errors."""


class RingMismatchError(ReeshomError):
    """Operands live in different rings."""


class AmbientMismatchError(ReeshomError):
    """Module elements belong to different ambient free modules."""


class ValidationError(ReeshomError):
    """Well-formedness violation in user-supplied data (degrees, arity, zero input)."""


class TaskError(ReeshomError):
    """Task-file diagnostic with source position."""

    def __init__(self, message: str, line: int, col: int, expected=None):
        self.message = message
        self.line = line
        self.col = col
        self.expected = tuple(expected) if expected else ()
        loc = f"{line}:{col}: {message}"
        if self.expected:
            loc += " (expected " + " or ".join(self.expected) + ")"
        super().__init__(loc)


class InternalError(ReeshomError):
    """An internal invariant failed; signals an engine bug, never bad input."""
