"""
Exception hierarchy for the toolkit.

Every error raised on purpose by the library derives from SipError so that
the command-line layer can map it to an exit code in one place.
"""

from typing import Optional


class SipError(Exception):
    """Base class for all toolkit errors."""
    pass


class ParseError(SipError, ValueError):
    """Raised for malformed expression text; carries the byte offset."""

    def __init__(self, offset: int, message: str):
        self.offset = offset
        self.message = message
        super().__init__(f"{message} (at offset {offset})")


class UnknownFunctionError(ParseError):
    """Raised when a call names a function other than sin, cos or exp."""

    def __init__(self, offset: int, name: str):
        self.name = name
        super().__init__(offset, f"Unknown function '{name}'")


class EvaluationError(SipError):
    """Raised when a point evaluation cannot produce a finite real."""
    pass


class DivisionByZeroError(EvaluationError, ZeroDivisionError):
    pass


class UnboundVariableError(EvaluationError, KeyError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"Variable '{name}' has no value in the assignment")

    def __str__(self) -> str:
        return self.args[0]


class EvaluationOverflowError(EvaluationError, OverflowError):
    pass


class IntervalDivisionByZeroError(SipError, ZeroDivisionError):
    """Raised when a denominator enclosure contains zero."""
    pass


class DimensionMismatchError(SipError, ValueError):
    pass


class GridSizeError(SipError, ValueError):
    pass


class SubsolverError(SipError):
    """Raised when a subproblem cannot be resolved (caps, duplicates)."""
    pass


class BisectionFailureError(SubsolverError):
    """Raised when the alpha oracle's segment search does not terminate."""
    pass


class OracleContractViolation(SipError):
    """Raised when an oracle reports a violating point with g <= 0."""
    pass


class InstanceFormatError(SipError, ValueError):
    """Raised for malformed instance files; carries the 1-based line number."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        self.message = message
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(f"{prefix}{message}")
