"""
Tests for the exact operator-norm comparisons and quadric helpers.
"""

from fractions import Fraction

import pytest

from eulercalc.commands.verify import eigvalsh_below
from eulercalc.lib.errors import BoundViolationError, EulerCalcError
from eulercalc.lib.models import Definiteness, OpNormOrder, SymMatrix
from eulercalc.lib.spectral import (
    bilinear,
    certified_opnorm_bound,
    definiteness,
    is_eigenvalue,
    opnorm_compare,
    opnorm_interval,
    quadric_extremum,
)
from eulercalc.utils.sampling import random_sym_matrix


class TestOpnormCompare:

    @pytest.mark.parametrize("r, expected", [
        ("4", OpNormOrder.EQUAL),
        ("9/2", OpNormOrder.LESS),
        ("7/2", OpNormOrder.GREATER),
        ("3", OpNormOrder.GREATER),
        ("1", OpNormOrder.GREATER),
    ])
    def test_diagonal(self, r, expected):
        assert opnorm_compare(SymMatrix.diag([3, -4]), r) is expected

    def test_zero_matrix(self):
        assert opnorm_compare(SymMatrix.zeros(3), "1/1000") is OpNormOrder.LESS

    def test_positive_eigenvalue_at_threshold(self):
        # eigenvalues 1 and 3
        A = SymMatrix.of([[2, 1], [1, 2]])
        assert opnorm_compare(A, 3) is OpNormOrder.EQUAL
        assert opnorm_compare(A, "301/100") is OpNormOrder.LESS
        assert opnorm_compare(A, "299/100") is OpNormOrder.GREATER

    def test_irrational_norm(self):
        # eigenvalues ±√2
        A = SymMatrix.of([[1, 1], [1, -1]])
        assert opnorm_compare(A, "141/100") is OpNormOrder.GREATER
        assert opnorm_compare(A, "142/100") is OpNormOrder.LESS

    def test_repeated_eigenvalue(self):
        assert opnorm_compare(SymMatrix.diag([-2, -2, 1]), 2) is OpNormOrder.EQUAL

    def test_rejects_nonpositive_threshold(self):
        with pytest.raises(EulerCalcError):
            opnorm_compare(SymMatrix.diag([1]), 0)

    def test_agrees_with_eigvalsh(self, rng):
        for _ in range(500):
            n = int(rng.integers(1, 6))
            A = random_sym_matrix(rng, n)
            r = Fraction(int(rng.integers(1, 40)), 8)
            assert (opnorm_compare(A, r) is OpNormOrder.LESS) == eigvalsh_below(A, r)


class TestOpnormInterval:

    def test_brackets_an_irrational_norm(self):
        # eigenvalues ±√2
        lo, hi = opnorm_interval(SymMatrix.of([[1, 1], [1, -1]]), Fraction(1, 10**6))
        assert hi - lo <= Fraction(1, 10**6)
        assert lo * lo <= 2 <= hi * hi

    def test_rational_norm(self):
        lo, hi = opnorm_interval(SymMatrix.diag([3, -4]), Fraction(1, 100))
        assert lo <= 4 <= hi

    def test_zero_matrix(self):
        assert opnorm_interval(SymMatrix.zeros(2), Fraction(1, 100)) == (0, 0)

    def test_is_eigenvalue(self):
        A = SymMatrix.diag([3, -4])
        assert is_eigenvalue(A, -4)
        assert not is_eigenvalue(A, 4)


class TestFloatOracle:

    def test_exact_tie_is_not_below(self):
        assert not eigvalsh_below(SymMatrix.diag(["1/3", "1/6"]), Fraction(1, 3))
        assert not eigvalsh_below(SymMatrix.diag(["-1/3", 0, "1/6"]), Fraction(1, 3))

    def test_near_tie_is_settled_exactly(self):
        gap = Fraction(1, 10**12)
        assert eigvalsh_below(SymMatrix.diag([Fraction(1, 3) - gap]), Fraction(1, 3))
        assert not eigvalsh_below(SymMatrix.diag([Fraction(1, 3) + gap]), Fraction(1, 3))

    def test_clear_margins(self):
        assert eigvalsh_below(SymMatrix.diag(["1/5", 0]), Fraction(1, 3))
        assert not eigvalsh_below(SymMatrix.diag([1, 0]), Fraction(1, 3))


class TestCertifiedBound:

    def test_bound_lies_between_norm_and_limit(self):
        A = SymMatrix.diag(["1/5", 0])
        r = certified_opnorm_bound(A, Fraction(1, 3))
        assert Fraction(1, 5) <= r < Fraction(1, 3)
        assert opnorm_compare(A, r) is not OpNormOrder.GREATER

    def test_zero_matrix(self):
        assert certified_opnorm_bound(SymMatrix.zeros(2), Fraction(1, 3)) == 0

    def test_violation(self):
        with pytest.raises(BoundViolationError):
            certified_opnorm_bound(SymMatrix.diag([1, 0]), Fraction(1, 2))


class TestDefiniteness:

    @pytest.mark.parametrize("diagonal, expected", [
        ([1, 2], Definiteness.POSITIVE),
        ([-1, "-1/3"], Definiteness.NEGATIVE),
        ([0, 0], Definiteness.ZERO),
        ([1, -1], Definiteness.OTHER),
        ([1, 0], Definiteness.OTHER),
    ])
    def test_diagonal(self, diagonal, expected):
        assert definiteness(SymMatrix.diag(diagonal)) is expected

    def test_off_diagonal(self):
        assert definiteness(SymMatrix.of([[2, 1], [1, 2]])) is Definiteness.POSITIVE
        assert definiteness(SymMatrix.of([[1, 2], [2, 1]])) is Definiteness.OTHER


class TestQuadricHelpers:

    def test_extremum_of_shifted_parabola(self):
        # x² + 2x has its minimum -1 at x = -1
        assert quadric_extremum(SymMatrix.diag([1]), (Fraction(2),)) == -1

    def test_extremum_without_linear_term(self):
        assert quadric_extremum(SymMatrix.diag([1, 3]), (Fraction(0), Fraction(0))) == 0

    def test_extremum_of_concave_quadric(self):
        # -x² - y² + 4y peaks at 4
        A = SymMatrix.diag([-1, -1])
        assert quadric_extremum(A, (Fraction(0), Fraction(4))) == 4

    def test_bilinear(self):
        A = SymMatrix.of([[1, 2], [2, 3]])
        x = (Fraction(1), Fraction(0))
        y = (Fraction(0), Fraction(1))
        assert bilinear(A, x, y) == 2
        assert bilinear(A, y, y) == 3
