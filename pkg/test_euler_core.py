"""
Tests for constructible functions, complex validation, Euler integration and line restriction.
"""

from collections import Counter
from fractions import Fraction

import pytest

from eulercalc.lib.errors import DimensionMismatchError, EulerCalcError
from eulercalc.lib.euler_core import (
    closure_indicator,
    euler_integral,
    fiber_function,
    fubini_check,
    is_constant_1d,
    level_sets,
    merge,
    negate,
    point_evaluate,
    reflect,
    restrict_to_line,
    scale,
    subtract,
    validate_complex,
    with_ambient,
)
from eulercalc.lib.models import ConstructibleFunction, GeometricComplex, Line2D
from eulercalc.utils.sampling import random_function_2d


def _triangle():
    return closure_indicator([(0, 0), (2, 0), (0, 2)])


class TestValidateComplex:

    def test_single_triangle_is_valid(self):
        complex = GeometricComplex.from_points(2, [(0, 0), (1, 0), (0, 1)], [(0, 1, 2)])
        assert validate_complex(complex).valid

    def test_repeated_vertex_index_is_dependent(self):
        complex = GeometricComplex.from_points(2, [(0, 0), (1, 0)], [(0, 0, 1)])
        report = validate_complex(complex)
        assert not report.valid
        assert report.dependent == (0,)

    def test_collinear_triangle_is_dependent(self):
        complex = GeometricComplex.from_points(2, [(0, 0), (1, 1), (2, 2)], [(0, 1, 2)])
        assert validate_complex(complex).dependent == (0,)

    def test_edge_listed_twice_overlaps(self):
        complex = GeometricComplex.from_points(2, [(0, 0), (1, 0)], [(0, 1), (1, 0)])
        report = validate_complex(complex)
        assert report.overlaps == ((0, 1),)

    def test_crossing_edges_overlap(self):
        complex = GeometricComplex.from_points(
            2, [(0, 0), (2, 2), (0, 2), (2, 0)], [(0, 1), (2, 3)]
        )
        assert validate_complex(complex).overlaps == ((0, 1),)

    def test_closed_triangle_faces_are_valid(self):
        assert validate_complex(_triangle().complex).valid

    def test_missing_vertex_is_rejected(self):
        with pytest.raises(EulerCalcError):
            GeometricComplex.from_points(1, [(0,)], [(0, 1)])

    def test_wrong_vertex_dimension_is_rejected(self):
        with pytest.raises(DimensionMismatchError):
            GeometricComplex.from_points(2, [(0,)], [(0,)])


class TestClosureExpand:

    def test_closed_edge(self, closed_segment):
        cells = {frozenset(points): weight for points, weight in closed_segment.cells()}
        assert cells == {
            frozenset({(Fraction(-1),)}): 1,
            frozenset({(Fraction(1),)}): 1,
            frozenset({(Fraction(-1),), (Fraction(1),)}): 1,
        }

    def test_closed_vertex(self):
        f = closure_indicator([(3, 4)], weight=5)
        assert list(f.cells()) == [(((Fraction(3), Fraction(4)),), 5)]

    def test_closed_triangle(self):
        dims = Counter(len(points) - 1 for points, weight in _triangle().cells() if weight == 1)
        assert dims == {0: 3, 1: 3, 2: 1}


class TestPointEvaluate:

    def test_inside_closed_segment(self, closed_segment):
        assert point_evaluate(closed_segment, (0,)) == 1
        assert point_evaluate(closed_segment, (1,)) == 1

    def test_outside_closed_segment(self, closed_segment):
        assert point_evaluate(closed_segment, (2,)) == 0

    def test_ambient_plus_open_edge(self):
        f = ConstructibleFunction.from_cells(2, [(((0, 0), (2, 0)), 2)], ambient_coeff=3)
        assert point_evaluate(f, (1, 0)) == 5
        assert point_evaluate(f, (2, 0)) == 3

    def test_dimension_mismatch(self, closed_segment):
        with pytest.raises(DimensionMismatchError):
            point_evaluate(closed_segment, (0, 0))


class TestEulerIntegral:

    def test_closed_segment(self, closed_segment):
        assert euler_integral(closed_segment) == 1

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_whole_space(self, n):
        assert euler_integral(ConstructibleFunction.constant(n, 1)) == (-1) ** n

    def test_open_interval_twice(self):
        f = ConstructibleFunction.from_cells(1, [(((0,), (1,)), 2)])
        assert euler_integral(f) == -2

    def test_closed_triangle(self):
        assert euler_integral(_triangle()) == 1

    def test_zero(self):
        assert euler_integral(ConstructibleFunction.zero(2)) == 0


class TestArithmetic:

    def test_difference_with_itself_vanishes(self, closed_segment):
        d = subtract(closed_segment, closed_segment)
        assert is_constant_1d(d, 0)
        assert euler_integral(d) == 0

    def test_merge_adds_pointwise(self, closed_segment, origin_point):
        total = merge(closed_segment, origin_point)
        assert point_evaluate(total, (0,)) == 2
        assert point_evaluate(total, (1,)) == 1

    def test_scale_and_negate(self, closed_segment):
        assert euler_integral(scale(closed_segment, 4)) == 4
        assert point_evaluate(negate(closed_segment), (0,)) == -1

    def test_with_ambient(self, closed_segment):
        f = with_ambient(closed_segment, 3)
        assert point_evaluate(f, (5,)) == 3
        assert euler_integral(f) == 1 - 3

    def test_merge_rejects_mixed_dimensions(self, closed_segment):
        with pytest.raises(DimensionMismatchError):
            merge(closed_segment, ConstructibleFunction.zero(2))


class TestRestrictToLine:

    def test_vertical_line_through_triangle(self):
        g = restrict_to_line(_triangle(), Line2D.vertical(1))
        values = {s: point_evaluate(g, (s,)) for s in map(Fraction, (-1, 0, 1, 2))}
        assert values == {Fraction(-1): 0, Fraction(0): 1, Fraction(1): 1, Fraction(2): 0}
        assert point_evaluate(g, (Fraction(1, 2),)) == 1
        assert euler_integral(g) == 1

    def test_point_on_line(self):
        f = ConstructibleFunction.from_cells(2, [(((0, 0),), 1)])
        line = Line2D((Fraction(0), Fraction(0)), (Fraction(1), Fraction(0)))
        g = restrict_to_line(f, line)
        assert [(points, w) for points, w in g.cells()] == [(((Fraction(0),),), 1)]

    def test_line_missing_support(self):
        g = restrict_to_line(_triangle(), Line2D.vertical(5))
        assert list(g.cells()) == []
        assert euler_integral(g) == 0

    def test_ambient_coefficient_carries_over(self):
        f = with_ambient(_triangle(), 2)
        g = restrict_to_line(f, Line2D.vertical(1))
        assert g.ambient_coeff == 2
        assert point_evaluate(g, (Fraction(1, 2),)) == 3

    def test_degenerate_line(self):
        with pytest.raises(EulerCalcError):
            Line2D((Fraction(0), Fraction(0)), (Fraction(0), Fraction(0)))


class TestFubini:

    def test_closed_triangle(self):
        assert fubini_check(_triangle()) == (1, 1)

    def test_fiber_function_of_triangle(self):
        fibers = fiber_function(_triangle())
        assert point_evaluate(fibers, (Fraction(1, 2),)) == 1
        assert point_evaluate(fibers, (Fraction(3),)) == 0

    def test_random_fixtures_with_ambient(self, rng):
        for k in range(10):
            f = random_function_2d(rng, ambient_coeff=k % 3 - 1)
            lhs, rhs = fubini_check(f)
            assert lhs == rhs


class TestLevelSetsAndReflection:

    def test_level_sets(self):
        f = ConstructibleFunction.from_cells(1, [(((0,),), 2), (((1,), (2,)), -1)], ambient_coeff=1)
        assert level_sets(f) == {1: [None], 3: [0], 0: [1]}

    def test_reflect_point(self):
        f = ConstructibleFunction.from_cells(2, [(((1, 2),), 1)])
        assert point_evaluate(reflect(f), (-1, -2)) == 1
        assert point_evaluate(reflect(f), (1, 2)) == 0

    def test_reflect_is_an_involution(self, rng):
        f = random_function_2d(rng, ambient_coeff=2)
        assert reflect(reflect(f)) == f

    def test_symmetric_function_is_fixed_pointwise(self, closed_segment):
        mirrored = reflect(closed_segment)
        for s in (-2, -1, 0, Fraction(1, 2), 1):
            assert point_evaluate(mirrored, (s,)) == point_evaluate(closed_segment, (s,))
