"""
Exact rational helpers.

Every coordinate, threshold and matrix entry in the package is a `Fraction`.
Strings use the reduced "p/q" form on output; "p/q", "p" and integers are accepted on input.
"""

import re
from fractions import Fraction
from math import lcm
from typing import Any, Iterable, Sequence

Point = tuple[Fraction, ...]

_RATIONAL_PATTERN = re.compile(r'^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$')


def to_rational(value: Any) -> Fraction:
    """Convert an int, Fraction or "p/q" string to a Fraction. Floats are rejected."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError(f"Not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        match = _RATIONAL_PATTERN.match(value)
        if not match:
            raise ValueError(f"Not a rational string: {value!r}")
        numerator = int(match.group(1))
        denominator = int(match.group(2)) if match.group(2) else 1
        if denominator == 0:
            raise ValueError(f"Zero denominator in {value!r}")
        return Fraction(numerator, denominator)
    raise ValueError(f"Not a rational: {value!r}")


def format_rational(value: Fraction) -> str:
    """Reduced "p/q" string; integers keep the explicit "/1"."""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def to_point(values: Iterable[Any]) -> Point:
    return tuple(to_rational(v) for v in values)


def dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def sub(a: Sequence[Fraction], b: Sequence[Fraction]) -> Point:
    return tuple(x - y for x, y in zip(a, b))


def add(a: Sequence[Fraction], b: Sequence[Fraction]) -> Point:
    return tuple(x + y for x, y in zip(a, b))


def scale(c: Fraction, a: Sequence[Fraction]) -> Point:
    return tuple(c * x for x in a)


def norm_squared(a: Sequence[Fraction]) -> Fraction:
    return dot(a, a)


def barycenter(points: Sequence[Sequence[Fraction]]) -> Point:
    k = len(points)
    return tuple(sum(coords, Fraction(0)) / k for coords in zip(*points))


def common_denominator(values: Iterable[Fraction]) -> int:
    """Least common multiple of the denominators (1 for an empty input)."""
    result = 1
    for value in values:
        result = lcm(result, value.denominator)
    return result


def sign(value: Fraction) -> int:
    return (value > 0) - (value < 0)
