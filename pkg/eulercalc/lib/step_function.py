"""
Right-continuous integer step functions of one real variable with exact breakpoints.

values[0] holds on (-inf, t_1), values[i] on [t_i, t_{i+1}) and values[m] on [t_m, inf).
Canonical form: strictly increasing breakpoints, adjacent values distinct.
"""

from bisect import bisect_right
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .errors import EulerCalcError


@dataclass(frozen=True)
class StepFunction:
    breakpoints: tuple[Fraction, ...]
    values: tuple[int, ...]

    def __post_init__(self):
        if len(self.values) != len(self.breakpoints) + 1:
            raise EulerCalcError(
                f"StepFunction needs {len(self.breakpoints) + 1} values, got {len(self.values)}"
            )

    @classmethod
    def constant(cls, value: int = 0) -> "StepFunction":
        return cls((), (int(value),))

    @classmethod
    def zero(cls) -> "StepFunction":
        return cls.constant(0)

    @classmethod
    def indicator_from(cls, t: Fraction, height: int = 1) -> "StepFunction":
        """height·1{s >= t}."""
        return cls.from_jumps(0, [(t, height)])

    @classmethod
    def from_jumps(cls, base: int, jumps: Iterable[tuple[Fraction, int]]) -> "StepFunction":
        """base + Σ height·1{s >= t} over the jumps, in canonical form."""
        totals: dict[Fraction, int] = defaultdict(int)
        for t, height in jumps:
            totals[t] += height
        breakpoints = []
        values = [int(base)]
        for t in sorted(totals):
            if totals[t]:
                breakpoints.append(t)
                values.append(values[-1] + totals[t])
        return cls(tuple(breakpoints), tuple(values))

    @classmethod
    def from_samples(cls, breakpoints, values) -> "StepFunction":
        """Canonicalise possibly redundant (breakpoints, values)."""
        return cls.from_jumps(values[0], (
            (t, values[i + 1] - values[i]) for i, t in enumerate(breakpoints)
        ))

    def __call__(self, t: Fraction) -> int:
        return self.values[bisect_right(self.breakpoints, t)]

    @property
    def value_at_minus_inf(self) -> int:
        return self.values[0]

    @property
    def terminal_value(self) -> int:
        return self.values[-1]

    def jumps(self) -> list[tuple[Fraction, int]]:
        return [(t, self.values[i + 1] - self.values[i]) for i, t in enumerate(self.breakpoints)]

    def __add__(self, other: "StepFunction") -> "StepFunction":
        return StepFunction.from_jumps(
            self.values[0] + other.values[0], self.jumps() + other.jumps()
        )

    def __neg__(self) -> "StepFunction":
        return self.scaled(-1)

    def __sub__(self, other: "StepFunction") -> "StepFunction":
        return self + (-other)

    def scaled(self, c: int) -> "StepFunction":
        return StepFunction.from_jumps(c * self.values[0], ((t, c * h) for t, h in self.jumps()))

    def rescaled_axis(self, factor: Fraction) -> "StepFunction":
        """t ↦ self(t / factor) for factor > 0: breakpoints scale by factor, values unchanged."""
        if factor <= 0:
            raise EulerCalcError("Axis rescaling needs a positive factor")
        return StepFunction(tuple(factor * t for t in self.breakpoints), self.values)

    def is_zero(self) -> bool:
        return self.breakpoints == () and self.values == (0,)

    def is_canonical(self) -> bool:
        increasing = all(a < b for a, b in zip(self.breakpoints, self.breakpoints[1:]))
        distinct = all(a != b for a, b in zip(self.values, self.values[1:]))
        return increasing and distinct

    def sample_points(self) -> list[Fraction]:
        """Every breakpoint, every gap midpoint, and one point beyond each end."""
        if not self.breakpoints:
            return [Fraction(0)]
        points = [self.breakpoints[0] - 1]
        for a, b in zip(self.breakpoints, self.breakpoints[1:]):
            points.extend([a, (a + b) / 2])
        points.extend([self.breakpoints[-1], self.breakpoints[-1] + 1])
        return points


def assert_right_continuous(curve: StepFunction, label: Optional[str] = None) -> None:
    """Structural check: canonical, finitely many breakpoints, value at t_i equals value just right of t_i."""
    where = f" ({label})" if label else ""
    if not curve.is_canonical():
        raise AssertionError(f"StepFunction is not canonical{where}: {curve}")
    bps = curve.breakpoints
    for i, t in enumerate(bps):
        right = (t + bps[i + 1]) / 2 if i + 1 < len(bps) else t + 1
        if curve(t) != curve(right):
            raise AssertionError(f"StepFunction is not right-continuous at {t}{where}")
