"""
Tests for the quadric Euler characteristic transform and the quadric compositions.
"""

from fractions import Fraction

import numpy as np
import pytest

from eulercalc.lib.ect import ect_value, schapira_identity_check_1d
from eulercalc.lib.errors import (
    BoundViolationError,
    DimensionMismatchError,
    SupportEscapesBallError,
    UnsupportedAmbientError,
    WrongOperationError,
)
from eulercalc.lib.euler_core import closure_indicator, point_evaluate
from eulercalc.lib.models import ConstructibleFunction, QuadricProbe, SymMatrix
from eulercalc.lib.qect import (
    AlgebraicBreakpoint,
    compose_fixed_a,
    compose_v0,
    interpolation_remark_check,
    qect_curve_1d_support,
    qect_eval_exact,
    qect_eval_pl,
    quadric_value,
    reflect,
    thm47_bound_check,
)
from eulercalc.lib.step_function import assert_right_continuous
from eulercalc.utils.sampling import (
    random_direction,
    random_low_dim_function,
    random_point,
    random_rational,
    random_sym_matrix,
)

ORIGIN_2D = (Fraction(0), Fraction(0))


def _probe(A, v, t) -> QuadricProbe:
    return QuadricProbe(A, tuple(Fraction(c) for c in v), Fraction(t))


def _points(n, *points) -> ConstructibleFunction:
    return ConstructibleFunction.from_cells(n, [((p,), 1) for p in points])


class TestQuadricValue:

    def test_identity(self):
        assert quadric_value(SymMatrix.diag([1, 1]), ORIGIN_2D, (1, 1)) == 2

    def test_linear_probe(self):
        assert quadric_value(SymMatrix.zeros(2), (Fraction(1), Fraction(0)), (3, 5)) == 3

    def test_saddle(self):
        assert quadric_value(SymMatrix.diag([1, -1]), ORIGIN_2D, (1, 1)) == 0

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            quadric_value(SymMatrix.diag([1, 1]), ORIGIN_2D, (1,))


class TestBoundCheck:

    @pytest.mark.parametrize("R", [0, "1/2", 1, 10])
    def test_zero_matrix_always_passes(self, R):
        assert thm47_bound_check(SymMatrix.zeros(2), R)

    @pytest.mark.parametrize("R", [0, "1/2", 1, 10])
    def test_unit_norm_never_passes(self, R):
        assert not thm47_bound_check(SymMatrix.diag([1, 0]), R)

    def test_small_matrix_on_unit_ball(self):
        assert thm47_bound_check(SymMatrix.diag(["1/5", 0]), 1)

    def test_threshold_itself_fails(self):
        # 1/(1 + 2) exactly
        assert not thm47_bound_check(SymMatrix.diag(["1/3", 0]), 1)

    def test_interpolation_limits(self):
        assert interpolation_remark_check(2, [Fraction(0), Fraction(1), Fraction(5)])
        assert interpolation_remark_check(3, [Fraction(1, 4)])


class TestQectEvalExact:

    def test_whole_space_under_a_ball(self):
        whole = ConstructibleFunction.constant(2, 1)
        A = SymMatrix.diag([1, 1])
        assert qect_eval_exact(whole, _probe(A, (0, 0), 0)) == 1
        assert qect_eval_exact(whole, _probe(A, (0, 0), 5)) == 1
        assert qect_eval_exact(whole, _probe(A, (0, 0), -1)) == 0

    def test_whole_space_under_a_concave_quadric(self):
        whole = ConstructibleFunction.constant(1, 1)
        A = SymMatrix.diag([-1])
        assert qect_eval_exact(whole, _probe(A, (0,), -1)) == 0
        assert qect_eval_exact(whole, _probe(A, (0,), 0)) == -1

    def test_whole_space_under_a_half_space(self):
        whole = ConstructibleFunction.constant(2, 3)
        assert qect_eval_exact(whole, _probe(SymMatrix.zeros(2), (1, 0), 4)) == 0

    def test_ambient_under_a_saddle_is_unsupported(self):
        whole = ConstructibleFunction.constant(2, 1)
        with pytest.raises(UnsupportedAmbientError):
            qect_eval_exact(whole, _probe(SymMatrix.diag([1, -1]), (0, 0), 1))

    @pytest.mark.parametrize("t, expected", [
        (-1, 0),
        (0, 0),
        ("1/4", 0),
        ("99/100", 0),
        (1, -1),
        (2, -1),
    ])
    def test_open_interval_under_a_parabola(self, open_unit_interval, t, expected):
        assert qect_eval_exact(open_unit_interval, _probe(SymMatrix.diag([1]), (0,), Fraction(t))) == expected

    def test_closed_segment_under_a_parabola(self, closed_segment):
        A = SymMatrix.diag([1])
        assert qect_eval_exact(closed_segment, _probe(A, (0,), "1/4")) == 1
        assert qect_eval_exact(closed_segment, _probe(A, (0,), -1)) == 0
        assert qect_eval_exact(closed_segment, _probe(A, (0,), 1)) == 1

    def test_segment_under_an_inverted_parabola(self, closed_segment):
        # {x ∈ [-1, 1] : -x² <= -1/4} is two closed intervals
        probe = _probe(SymMatrix.diag([-1]), (0,), "-1/4")
        assert qect_eval_exact(closed_segment, probe) == 2

    def test_segment_with_linear_restriction(self):
        f = ConstructibleFunction.from_cells(2, [(((0, 0), (2, 0)), 1)])
        probe = _probe(SymMatrix.zeros(2), (1, 0), 1)
        # (0, 1]: open interval plus one end
        assert qect_eval_exact(f, probe) == 0

    def test_points(self):
        f = _points(2, (1, 1), (2, 0))
        assert qect_eval_exact(f, _probe(SymMatrix.diag([1, 1]), (0, 0), 2)) == 1
        assert qect_eval_exact(f, _probe(SymMatrix.diag([1, 1]), (0, 0), 4)) == 2

    def test_two_dimensional_cells_are_rejected(self):
        triangle = closure_indicator([(0, 0), (1, 0), (0, 1)])
        with pytest.raises(WrongOperationError):
            qect_eval_exact(triangle, _probe(SymMatrix.diag([1, 1]), (0, 0), 1))

    def test_sign_ambiguity_example(self, rng):
        p = _points(3, (1, 1, 1))
        q = _points(3, (-1, -1, -1))
        for _ in range(20):
            A = random_sym_matrix(rng, 3)
            if A.is_zero():
                continue
            probe = _probe(A, (0, 0, 0), random_rational(rng, -5, 5))
            assert qect_eval_exact(p, probe) == qect_eval_exact(q, probe)

    def test_sign_symmetry_on_random_fixtures(self, rng):
        for i in range(40):
            n = 1 + i % 2
            f = random_low_dim_function(rng, n)
            A = random_sym_matrix(rng, n)
            if A.is_zero():
                continue
            probe = QuadricProbe(A, (Fraction(0),) * n, random_rational(rng, -6, 6))
            assert qect_eval_exact(f, probe) == qect_eval_exact(reflect(f), probe)

    def test_additive_in_the_function(self, rng):
        for _ in range(10):
            f = random_low_dim_function(rng, 2, cells=6)
            A = random_sym_matrix(rng, 2)
            if A.is_zero():
                continue
            probe = QuadricProbe(A, random_point(rng, 2), random_rational(rng, -6, 6))
            total = sum(
                w * qect_eval_exact(ConstructibleFunction.from_cells(2, [(points, 1)]), probe)
                for points, w in f.cells()
            )
            assert qect_eval_exact(f, probe) == total


def _grid_open_segment_chi(a, b, probe: QuadricProbe, steps: int) -> int:
    """χ_c of {s ∈ (0,1) : q(a + s(b - a)) <= t} read off a dense grid of the open segment."""
    a_f = np.array([float(c) for c in a])
    d_f = np.array([float(c) for c in b]) - a_f
    A_f = np.array([[float(c) for c in row] for row in probe.A.entries])
    v_f = np.array([float(c) for c in probe.v])
    xs = a_f + (np.arange(1, steps) / steps)[:, None] * d_f
    inside = np.einsum("ij,jk,ik->i", xs, A_f, xs) + xs @ v_f <= float(probe.t)
    edges = np.diff(np.concatenate([[0], inside.astype(int), [0]]))
    chi = 0
    for start, end in zip(np.flatnonzero(edges == 1), np.flatnonzero(edges == -1) - 1):
        touches = int(start == 0) + int(end == len(inside) - 1)
        chi += (1, 0, -1)[touches]
    return chi


def _well_separated(a, b, probe: QuadricProbe, gap: float) -> bool:
    """The restricted quadratic has no tangency, and its roots keep away from 0, 1 and each other."""
    d = tuple(y - x for x, y in zip(a, b))
    alpha = quadric_value(probe.A, (Fraction(0),) * len(d), d)
    beta = 2 * sum(a[i] * probe.A.entries[i][j] * d[j] for i in range(len(d)) for j in range(len(d)))
    beta += sum(c * x for c, x in zip(probe.v, d))
    gamma = quadric_value(probe.A, probe.v, a) - probe.t
    if alpha == 0 and beta == 0:
        return gamma != 0
    if alpha != 0 and beta * beta - 4 * alpha * gamma == 0:
        return False
    coefficients = [float(alpha), float(beta), float(gamma)] if alpha else [float(beta), float(gamma)]
    critical = [r.real for r in np.roots(coefficients) if abs(r.imag) < 1e-12] + [0.0, 1.0]
    critical.sort()
    return all(y - x > gap for x, y in zip(critical, critical[1:]))


class TestProbeInvariants:

    def test_scale_invariance(self, rng):
        for _ in range(30):
            f = random_low_dim_function(rng, 2)
            A, v = random_sym_matrix(rng, 2), random_point(rng, 2)
            if A.is_zero() and not any(v):
                continue
            probe = QuadricProbe(A, v, random_rational(rng, -6, 6))
            c = Fraction(int(rng.integers(1, 20)), int(rng.integers(1, 20)))
            assert qect_eval_exact(f, probe.scaled(c)) == qect_eval_exact(f, probe)

    def test_equivalent_probes_normalize_alike(self):
        probe = _probe(SymMatrix.of([["1/2", 1], [1, -3]]), ("3/4", 0), "5/2")
        scaled = probe.scaled(Fraction(7, 3))
        assert scaled.normalized() == probe.normalized()
        assert probe.same_probe(scaled)
        assert not probe.same_probe(probe.scaled(-1))
        assert max(abs(c) for row in probe.normalized().A.entries for c in row) == 1

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_zero_matrix_reduces_to_the_ect(self, rng, n):
        for _ in range(15):
            f = random_low_dim_function(rng, n)
            direction = random_direction(rng, n)
            t = random_rational(rng, -20, 20)
            probe = QuadricProbe(SymMatrix.zeros(n), direction.nu, t)
            assert qect_eval_exact(f, probe) == ect_value(f, direction, t)

    def test_open_segments_against_a_dense_grid(self, rng):
        steps = 4000
        checked = 0
        for _ in range(400):
            a, b = random_point(rng, 2), random_point(rng, 2)
            A = random_sym_matrix(rng, 2)
            v = random_point(rng, 2)
            if a == b or (A.is_zero() and not any(v)):
                continue
            probe = QuadricProbe(A, v, random_rational(rng, -6, 6))
            if not _well_separated(a, b, probe, gap=10 / steps):
                continue
            segment = ConstructibleFunction.from_cells(2, [((a, b), 1)])
            assert qect_eval_exact(segment, probe) == _grid_open_segment_chi(a, b, probe, steps)
            checked += 1
        assert checked >= 50


class TestQectCurve:

    def test_point(self):
        curve = qect_curve_1d_support(_points(2, (1, 2)), SymMatrix.diag([1, 1]), (0, 0))
        assert curve.breakpoints == (AlgebraicBreakpoint.rational(Fraction(5)),)
        assert curve.values == (0, 1)

    def test_open_interval(self, open_unit_interval):
        curve = qect_curve_1d_support(open_unit_interval, SymMatrix.diag([1]), (0,))
        assert [(b.lower, b.upper) for b in curve.breakpoints] == [(Fraction(1), Fraction(1))]
        assert curve.values == (0, -1)
        assert curve(Fraction(1, 2)) == 0

    def test_zero(self):
        curve = qect_curve_1d_support(ConstructibleFunction.zero(1), SymMatrix.diag([1]), (0,))
        assert curve.breakpoints == ()
        assert curve.values == (0,)

    def test_whole_space_adds_the_extremum(self):
        curve = qect_curve_1d_support(
            ConstructibleFunction.constant(1, 1), SymMatrix.diag([1]), (Fraction(2),)
        )
        assert curve.as_step_function().breakpoints == (Fraction(-1),)
        assert curve.values == (0, 1)

    def test_curves_match_pointwise_values(self, rng):
        for i in range(20):
            n = 1 + i % 2
            f = random_low_dim_function(rng, n)
            A = random_sym_matrix(rng, n)
            v = random_point(rng, n)
            if A.is_zero() and not any(v):
                continue
            curve = qect_curve_1d_support(f, A, v)
            step = curve.as_step_function()
            assert_right_continuous(step)
            for t in step.sample_points():
                assert step(t) == qect_eval_exact(f, QuadricProbe(A, v, t))

    def test_irrational_breakpoint_has_no_rational_value(self):
        breakpoint = AlgebraicBreakpoint((Fraction(1), Fraction(0), Fraction(-2)), Fraction(1), Fraction(2))
        assert not breakpoint.is_rational
        with pytest.raises(WrongOperationError):
            breakpoint.value


class TestQectEvalPl:

    TRIANGLE = [(-4, -4), (8, -4), (-4, 8)]

    def test_small_disk_inside_the_triangle(self):
        f = closure_indicator(self.TRIANGLE)
        estimate = qect_eval_pl(f, _probe(SymMatrix.diag([1, 1]), (0, 0), 1), max_level=4)
        assert estimate.estimate == 1
        assert estimate.stable

    def test_whole_triangle_inside_the_sublevel(self):
        f = closure_indicator(self.TRIANGLE)
        estimate = qect_eval_pl(f, _probe(SymMatrix.diag([1, 1]), (0, 0), 1000), max_level=3)
        assert (estimate.estimate, estimate.stable, estimate.level) == (1, True, 1)

    def test_empty_sublevel(self):
        f = closure_indicator(self.TRIANGLE)
        estimate = qect_eval_pl(f, _probe(SymMatrix.diag([1, 1]), (0, 0), -1), max_level=3)
        assert (estimate.estimate, estimate.stable) == (0, True)

    def test_matches_exact_on_points_and_segments(self, closed_segment):
        probe = _probe(SymMatrix.diag([1]), (0,), 4)
        estimate = qect_eval_pl(closed_segment, probe, max_level=3)
        assert estimate.estimate == qect_eval_exact(closed_segment, probe)

    def test_unstable_when_capped_at_zero_levels(self):
        f = closure_indicator(self.TRIANGLE)
        estimate = qect_eval_pl(f, _probe(SymMatrix.diag([1, 1]), (0, 0), 1), max_level=0)
        assert not estimate.stable
        assert estimate.level == 0


class TestComposeV0:

    P = (Fraction(1), Fraction(2))
    MINUS_P = (Fraction(-1), Fraction(-2))

    def test_antipodal_pair_at_the_point(self):
        h = _points(2, self.P, self.MINUS_P)
        assert compose_v0(h, self.P) == 4

    def test_antipodal_pair_elsewhere(self):
        h = _points(2, self.P, self.MINUS_P)
        assert compose_v0(h, (3, 3)) == 2

    def test_zero(self):
        assert compose_v0(ConstructibleFunction.zero(2), self.P) == 0

    def test_origin_is_counted_once(self):
        h = _points(2, (0, 0))
        assert compose_v0(h, (0, 0)) == 2


class TestComposeFixedA:

    def test_origin_in_the_plane(self):
        h = _points(2, (0, 0))
        A = SymMatrix.zeros(2)
        assert compose_fixed_a(h, A, 1, (0, 0)) == 0
        assert compose_fixed_a(h, A, 1, (1, 0)) == 1

    def test_origin_on_the_line(self, origin_point):
        assert compose_fixed_a(origin_point, SymMatrix.zeros(1), 1, (0,)) == 2

    def test_zero(self):
        assert compose_fixed_a(ConstructibleFunction.zero(2), SymMatrix.zeros(2), 1, (0, 0)) == 0

    def test_matches_one_dimensional_identity(self, closed_segment):
        queries = [Fraction(k, 2) for k in range(-4, 5)]
        expected = schapira_identity_check_1d(closed_segment, queries).rhs
        got = tuple(compose_fixed_a(closed_segment, SymMatrix.zeros(1), 2, (q,)) for q in queries)
        assert got == expected

    def test_small_matrix_within_the_bound(self):
        h = closure_indicator([(0, 0), ("1/2", 0)])
        A = SymMatrix.diag(["1/10", "-1/10"])
        assert compose_fixed_a(h, A, 1, ("1/4", 0)) == -1 * point_evaluate(h, ("1/4", 0)) + 1

    def test_bound_violation(self):
        with pytest.raises(BoundViolationError):
            compose_fixed_a(_points(2, (0, 0)), SymMatrix.diag([1, 0]), 1, (0, 0))

    def test_support_outside_the_ball(self):
        with pytest.raises(SupportEscapesBallError):
            compose_fixed_a(_points(2, (5, 0)), SymMatrix.zeros(2), 1, (0, 0))

    def test_ambient_coefficient_escapes_every_ball(self):
        with pytest.raises(SupportEscapesBallError):
            compose_fixed_a(ConstructibleFunction.constant(1, 1), SymMatrix.zeros(1), 10, (0,))


class TestReflect:

    def test_point(self):
        mirrored = reflect(_points(2, (1, 2)))
        assert point_evaluate(mirrored, (-1, -2)) == 1

    def test_involution(self, closed_segment):
        assert reflect(reflect(closed_segment)) == closed_segment
