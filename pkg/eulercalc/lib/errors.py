"""
Exceptions raised by the exact Euler-calculus core.

Core modules raise these and never exit; the orchestrator maps them to exit statuses.
"""

from typing import Optional


class EulerCalcError(Exception):
    """Base exception for eulercalc errors."""
    def __init__(self, message: str, exit_code: Optional[int] = None):
        self.message = message
        self.exit_code = exit_code if exit_code is not None else 1
        super().__init__(self.message)


class InvalidComplexError(EulerCalcError):
    """A complex failed validation where a valid one is required."""


class DimensionMismatchError(EulerCalcError):
    """Points, matrices or functions live in different ambient dimensions."""


class ParseError(EulerCalcError):
    """Input file does not match the documented format."""
    def __init__(
        self,
        message: str,
        line: Optional[int] = None,
        column: Optional[int] = None,
        where: Optional[str] = None,
    ):
        self.detail = message
        self.line = line
        self.column = column
        # path of the offending value, e.g. "simplices[2].weight"
        self.where = where
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message, exit_code=2)


class UnsupportedAmbientError(EulerCalcError):
    """Ambient term c·1_{R^n} under a quadric without a closed-form sublevel characteristic."""


class WrongOperationError(EulerCalcError):
    """The operation does not accept the given input (e.g. exact QECT on 2-cells)."""


class BoundViolationError(EulerCalcError):
    """||A||_op < 1/(1 + 2R^2) does not hold."""


class SupportEscapesBallError(EulerCalcError):
    """A function is not supported inside the closed ball B_R(0)."""


class NeedsCommonTriangulationError(EulerCalcError):
    """Two supports overlap without sharing cells and no exact refinement is implemented."""


class InconsistentTableError(EulerCalcError):
    """An ECT table implies two different Euler integrals."""


class DirectionSetError(EulerCalcError):
    """The direction set is not the one an operation requires."""


class NonIndicatorError(EulerCalcError):
    """A function expected to take values in {0, 1} does not."""


class UnsupportedPartitionError(EulerCalcError):
    """A composition partition spec outside diagonal, ±diagonal and complement."""
