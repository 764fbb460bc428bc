"""
Exact core libraries.
"""

from .errors import EulerCalcError
from .models import (
    ConstructibleFunction,
    DirectionProbe,
    EctTable,
    GeometricComplex,
    KernelKind,
    QuadricProbe,
    SymMatrix,
)
from .step_function import StepFunction

__all__ = [
    "ConstructibleFunction",
    "DirectionProbe",
    "EctTable",
    "EulerCalcError",
    "GeometricComplex",
    "KernelKind",
    "QuadricProbe",
    "StepFunction",
    "SymMatrix",
]
