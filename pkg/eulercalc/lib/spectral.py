"""
Exact spectral predicates for symmetric rational matrices.

The operator norm of a symmetric matrix is its largest absolute eigenvalue, which is irrational in
general; everything here decides inequalities about it through Sturm root counting on the
characteristic polynomial.
"""

import logging
from fractions import Fraction
from functools import lru_cache

import sympy

from .errors import BoundViolationError, EulerCalcError
from .models import Definiteness, OpNormOrder, SymMatrix
from .rational import Point, dot, to_rational

logger = logging.getLogger(__name__)

_LAMBDA = sympy.Symbol("lam")


def to_sympy(A: SymMatrix) -> sympy.Matrix:
    return sympy.Matrix([[sympy.Rational(c.numerator, c.denominator) for c in row] for row in A.entries])


def _fraction(value) -> Fraction:
    value = sympy.Rational(value)
    return Fraction(int(value.p), int(value.q))


@lru_cache(maxsize=512)
def _sturm_chain(A: SymMatrix) -> tuple:
    """Sturm sequence of the square-free part of det(λI - A)."""
    charpoly = sympy.Poly(to_sympy(A).charpoly(_LAMBDA).as_expr(), _LAMBDA)
    return tuple(sympy.sturm(charpoly.sqf_part()))


def _variations(signs) -> int:
    signs = [s for s in signs if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _variations_at(chain, value: Fraction) -> int:
    point = sympy.Rational(value.numerator, value.denominator)
    return _variations([sympy.sign(p.eval(point)) for p in chain])


def _variations_at_infinity(chain, direction: int) -> int:
    return _variations([sympy.sign(p.LC()) * direction ** p.degree() for p in chain])


def opnorm_compare(A: SymMatrix, r) -> OpNormOrder:
    """
    Compare ||A||_op with a positive rational r, exactly.

    With V the sign-variation count of the Sturm chain, V(a) - V(b) counts the distinct
    eigenvalues in (a, b]; eigenvalues beyond ±r make the norm greater, an eigenvalue at ±r
    (and none beyond) makes it equal.

    Args:
        A: symmetric rational matrix
        r: positive rational threshold

    Returns:
        OpNormOrder.LESS, EQUAL or GREATER
    """
    r = to_rational(r)
    if r <= 0:
        raise EulerCalcError(f"opnorm_compare needs r > 0, got {r}")
    chain = _sturm_chain(A)
    p = chain[0]
    at_r = _variations_at(chain, r)
    at_minus_r = _variations_at(chain, -r)
    root_at_r = p.eval(sympy.Rational(r.numerator, r.denominator)) == 0
    root_at_minus_r = p.eval(sympy.Rational(-r.numerator, r.denominator)) == 0

    above = at_r - _variations_at_infinity(chain, 1)
    below = _variations_at_infinity(chain, -1) - at_minus_r - (1 if root_at_minus_r else 0)
    if above > 0 or below > 0:
        return OpNormOrder.GREATER
    if root_at_r or root_at_minus_r:
        return OpNormOrder.EQUAL
    return OpNormOrder.LESS


def certified_opnorm_bound(A: SymMatrix, below, steps: int = 16) -> Fraction:
    """A rational r with ||A||_op <= r < below, tightened by bisection.

    Raises:
        BoundViolationError: ||A||_op >= below
    """
    below = to_rational(below)
    if A.is_zero():
        return Fraction(0)
    if opnorm_compare(A, below) is not OpNormOrder.LESS:
        raise BoundViolationError(f"||A||_op is not below {below}")

    lo, hi = Fraction(0), below
    certified = None
    iterations = 0
    while certified is None or iterations < steps:
        mid = (lo + hi) / 2
        if opnorm_compare(A, mid) is OpNormOrder.GREATER:
            lo = mid
        else:
            hi = mid
            certified = mid
        iterations += 1
    logger.debug(f"Certified ||A||_op <= {certified} after {iterations} bisection steps")
    return certified


def is_eigenvalue(A: SymMatrix, value) -> bool:
    value = to_rational(value)
    shifted = to_sympy(A) - sympy.Rational(value.numerator, value.denominator) * sympy.eye(A.n)
    return shifted.det() == 0


def opnorm_interval(A: SymMatrix, resolution) -> tuple[Fraction, Fraction]:
    """
    Rationals lo <= ||A||_op <= hi with hi - lo <= resolution.

    Independent of the Sturm counts above: the real roots of det(λI - A) are isolated and refined
    by sympy, and the norm is bracketed by the largest |root| interval.
    """
    resolution = to_rational(resolution)
    charpoly = sympy.Poly(to_sympy(A).charpoly(_LAMBDA).as_expr(), _LAMBDA)
    eps = sympy.Rational(resolution.numerator, resolution.denominator)
    lo, hi = Fraction(0), Fraction(0)
    for (a, b), _ in charpoly.intervals(eps=eps):
        a, b = _fraction(a), _fraction(b)
        upper = max(abs(a), abs(b))
        lower = 0 if a <= 0 <= b else min(abs(a), abs(b))
        lo, hi = max(lo, lower), max(hi, upper)
    return lo, hi


def definiteness(A: SymMatrix) -> Definiteness:
    if A.is_zero():
        return Definiteness.ZERO
    matrix = to_sympy(A)
    if matrix.is_positive_definite:
        return Definiteness.POSITIVE
    if matrix.is_negative_definite:
        return Definiteness.NEGATIVE
    return Definiteness.OTHER


def quadric_extremum(A: SymMatrix, v: Point) -> Fraction:
    """The extreme value -¼ vᵀA⁻¹v of xᵀAx + v·x for invertible A."""
    inverse = to_sympy(A).inv()
    v_sym = sympy.Matrix([sympy.Rational(c.numerator, c.denominator) for c in v])
    return -_fraction((v_sym.T * inverse * v_sym)[0, 0]) / 4


def bilinear(A: SymMatrix, x: Point, y: Point) -> Fraction:
    """xᵀAy."""
    return dot(x, [dot(row, y) for row in A.entries])
