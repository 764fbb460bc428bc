"""
Exact geometric predicates on rational points.

Everything here is exact: affine rank, barycentric membership, segment intersection and
relative-interior overlap (decided as an exact linear program).
"""

import logging
from fractions import Fraction
from typing import Optional, Sequence

import sympy
from sympy.solvers.simplex import InfeasibleLPError, lpmax

from .rational import Point, dot, sub

logger = logging.getLogger(__name__)


def _sympy_rational(value: Fraction) -> sympy.Rational:
    return sympy.Rational(value.numerator, value.denominator)


def _fraction(value) -> Fraction:
    value = sympy.Rational(value)
    return Fraction(int(value.p), int(value.q))


def affine_rank(points: Sequence[Point]) -> int:
    """Dimension of the affine hull of the points (-1 for no points)."""
    if not points:
        return -1
    if len(points) == 1:
        return 0
    base = points[0]
    rows = [[_sympy_rational(c) for c in sub(p, base)] for p in points[1:]]
    return sympy.Matrix(rows).rank()


def is_affinely_independent(points: Sequence[Point]) -> bool:
    return affine_rank(points) == len(points) - 1


def orientation_2d(a: Point, b: Point, c: Point) -> Fraction:
    """Twice the signed area of (a, b, c); positive for counter-clockwise."""
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def cross_2d(u: Sequence[Fraction], w: Sequence[Fraction]) -> Fraction:
    return u[0] * w[1] - u[1] * w[0]


def segment_parameter(a: Point, b: Point, x: Point) -> Optional[Fraction]:
    """s with x = a + s(b - a) when x lies on the line through a and b, else None."""
    direction = sub(b, a)
    offset = sub(x, a)
    pivot = next(i for i, c in enumerate(direction) if c != 0)
    s = offset[pivot] / direction[pivot]
    if all(offset[i] == s * direction[i] for i in range(len(direction))):
        return s
    return None


def barycentric_coordinates(points: Sequence[Point], x: Point) -> Optional[tuple[Fraction, ...]]:
    """Barycentric coordinates of x w.r.t. affinely independent points, None off the affine hull."""
    k = len(points) - 1
    if k == 0:
        return (Fraction(1),) if tuple(points[0]) == tuple(x) else None
    if k == 1:
        s = segment_parameter(points[0], points[1], x)
        return None if s is None else (1 - s, s)
    base = points[0]
    columns = [sub(p, base) for p in points[1:]]
    matrix = sympy.Matrix([[_sympy_rational(col[i]) for col in columns] for i in range(len(base))])
    rhs = sympy.Matrix([_sympy_rational(c) for c in sub(x, base)])
    try:
        solution, params = matrix.gauss_jordan_solve(rhs)
    except ValueError:
        return None
    if params.shape[0]:
        raise ValueError("Simplex vertices are affinely dependent")
    tail = tuple(_fraction(v) for v in solution)
    return (1 - sum(tail, Fraction(0)),) + tail


def relint_contains(points: Sequence[Point], x: Point) -> bool:
    """Is x in the relative interior of the simplex spanned by the points?"""
    if len(points) == 3 and len(x) == 2:
        a, b, c = points
        signs = [orientation_2d(a, b, x), orientation_2d(b, c, x), orientation_2d(c, a, x)]
        return all(s > 0 for s in signs) or all(s < 0 for s in signs)
    coords = barycentric_coordinates(points, x)
    return coords is not None and all(c > 0 for c in coords)


def bounding_boxes_disjoint(a: Sequence[Point], b: Sequence[Point]) -> bool:
    for axis in range(len(a[0])):
        if max(p[axis] for p in a) < min(p[axis] for p in b):
            return True
        if max(p[axis] for p in b) < min(p[axis] for p in a):
            return True
    return False


def relint_overlap(a: Sequence[Point], b: Sequence[Point]) -> bool:
    """Exact test whether relint(conv a) and relint(conv b) intersect.

    Maximises ε subject to λ_i >= ε, μ_j >= ε, Σλ = Σμ = 1 and Σλ_i a_i = Σμ_j b_j;
    the relative interiors meet iff the optimum is positive.
    """
    if bounding_boxes_disjoint(a, b):
        return False
    union = list(dict.fromkeys(tuple(a) + tuple(b)))
    if set(a) != set(b) and is_affinely_independent(union):
        # distinct faces of one simplex
        return False
    lam = sympy.symbols(f"lam0:{len(a)}")
    mu = sympy.symbols(f"mu0:{len(b)}")
    eps = sympy.Symbol("eps")
    constraints = [l >= eps for l in lam] + [m >= eps for m in mu] + [eps <= 1]
    constraints.append(sympy.Eq(sum(lam), 1))
    constraints.append(sympy.Eq(sum(mu), 1))
    for axis in range(len(a[0])):
        lhs = sum(l * _sympy_rational(p[axis]) for l, p in zip(lam, a))
        rhs = sum(m * _sympy_rational(p[axis]) for m, p in zip(mu, b))
        constraints.append(sympy.Eq(lhs - rhs, 0))
    try:
        optimum, _ = lpmax(eps, constraints)
    except InfeasibleLPError:
        return False
    return bool(optimum > 0)


def segment_intersection_2d(p1: Point, p2: Point, q1: Point, q2: Point) -> Optional[Point]:
    """Single intersection point of two closed, non-parallel segments in R^2, else None."""
    d1 = sub(p2, p1)
    d2 = sub(q2, q1)
    denom = cross_2d(d1, d2)
    if denom == 0:
        return None
    offset = sub(q1, p1)
    s = cross_2d(offset, d2) / denom
    u = cross_2d(offset, d1) / denom
    if 0 <= s <= 1 and 0 <= u <= 1:
        return (p1[0] + s * d1[0], p1[1] + s * d1[1])
    return None


def projection_extremes(points: Sequence[Point], nu: Sequence[Fraction]) -> tuple[Fraction, Fraction]:
    values = [dot(p, nu) for p in points]
    return min(values), max(values)
