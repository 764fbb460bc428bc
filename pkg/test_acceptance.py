"""
Property-based acceptance checks on seeded random instances.

The fast tests run the verify suite at reduced counts; the `slow` ones run the full counts and the
desk-scale performance sweep (`pytest -m slow`).
"""

import time
from fractions import Fraction

import pytest

from eulercalc.commands.verify import (
    check_bundled_examples,
    check_classification,
    check_composition_1d,
    check_compose_v0,
    check_corollary,
    check_fiber_chi,
    check_fixed_a,
    check_fubini,
    check_inversion_1d,
    check_schapira_1d,
    check_sign_symmetry,
)
from eulercalc.lib.ect import ect_cell_curve, ect_sweep
from eulercalc.lib.geometry import is_affinely_independent
from eulercalc.lib.rational import dot
from eulercalc.lib.step_function import StepFunction
from eulercalc.main import main
from eulercalc.utils.sampling import (
    random_direction,
    random_directions,
    random_function_2d,
    random_point,
    random_weight,
    rng_for,
)


def _assert_clean(tally):
    assert tally.failures == 0, tally.first
    assert tally.trials > 0


def _relint_halfspace_chi(points, nu, t) -> int:
    """χ_c(relint σ ∩ {ν·x <= t}) by case analysis on the open convex pieces {< t} and {= t}."""
    heights = [dot(p, nu) for p in points]
    low, high = min(heights), max(heights)
    dim = len(points) - 1
    if t < low:
        return 0
    if low == high or t >= high:
        return (-1) ** dim
    if t == low:
        # the minimum is attained on a proper face only
        return 0
    # nonempty open piece of dim d below t, and an open slice of dim d - 1 on the hyperplane
    return (-1) ** dim + (-1) ** (dim - 1)


class TestCellCurveOracle:

    def test_random_simplices(self, rng):
        checked = 0
        while checked < 500:
            n = int(rng.integers(1, 4))
            k = int(rng.integers(0, n + 1))
            points = [random_point(rng, n) for _ in range(k + 1)]
            if not is_affinely_independent(points):
                continue
            direction = random_direction(rng, n, bound=2)
            weight = random_weight(rng)
            curve = ect_cell_curve(points, weight, direction)
            heights = sorted({dot(p, direction.nu) for p in points})
            samples = [heights[0] - 1, heights[-1] + 1]
            samples += heights + [(a + b) / 2 for a, b in zip(heights, heights[1:])]
            for t in samples:
                assert curve(t) == weight * _relint_halfspace_chi(points, direction.nu, t)
            checked += 1


class TestReducedSuite:

    def test_bundled_examples(self):
        _assert_clean(check_bundled_examples())

    def test_schapira_1d(self, rng):
        tally = check_schapira_1d(rng, 5, 2, queries=20)
        _assert_clean(tally)
        # one identity and two right-continuity checks per function
        assert tally.trials == 7 * 3

    def test_composition_1d(self, rng):
        _assert_clean(check_composition_1d(rng, 10))

    def test_inversion_1d(self, rng):
        _assert_clean(check_inversion_1d(rng, 10))

    def test_classification(self, rng):
        _assert_clean(check_classification(rng, 9, direction_count=12))

    def test_corollary_and_zero_transform(self, rng):
        _assert_clean(check_corollary(rng, 6))

    def test_compose_v0(self, rng):
        _assert_clean(check_compose_v0(rng, 10))

    def test_sign_symmetry(self, rng):
        _assert_clean(check_sign_symmetry(rng, 20))

    def test_fixed_a(self, rng):
        _assert_clean(check_fixed_a(rng, 20))

    def test_fubini(self, rng):
        _assert_clean(check_fubini(rng, 10))

    def test_fiber_chi(self, rng):
        _assert_clean(check_fiber_chi(rng, 4, refinement=4))

    def test_same_seed_same_bytes(self, tmp_path):
        outputs = []
        for name in ("first.jsonl", "second.jsonl"):
            target = tmp_path / name
            args = ["verify", "--trials", "1", "--refine-max", "2", "--seed", "5"]
            main(args + ["--output", str(target)])
            outputs.append(target.read_bytes())
        assert outputs[0] == outputs[1]
        assert b"seconds" not in outputs[0]


@pytest.mark.slow
class TestFullSuite:

    def test_schapira_1d(self):
        rng = rng_for(1)
        start = time.perf_counter()
        tally = check_schapira_1d(rng, 50, 10, queries=100)
        _assert_clean(tally)
        assert tally.trials == 60 * 3
        assert time.perf_counter() - start < 10

    def test_inversion_1d(self):
        _assert_clean(check_inversion_1d(rng_for(2), 50))

    def test_composition_1d(self):
        _assert_clean(check_composition_1d(rng_for(11), 60))

    def test_classification(self):
        rng = rng_for(3)
        start = time.perf_counter()
        _assert_clean(check_classification(rng, 100, direction_count=100))
        assert time.perf_counter() - start < 30

    def test_corollary(self):
        _assert_clean(check_corollary(rng_for(4), 100))

    def test_compose_v0(self):
        _assert_clean(check_compose_v0(rng_for(5), 100))

    def test_sign_symmetry(self):
        _assert_clean(check_sign_symmetry(rng_for(6), 200))

    def test_fixed_a(self):
        _assert_clean(check_fixed_a(rng_for(7), 500))

    def test_fubini(self):
        _assert_clean(check_fubini(rng_for(8), 50))

    def test_fiber_chi(self):
        start = time.perf_counter()
        _assert_clean(check_fiber_chi(rng_for(9), 100, refinement=4))
        assert time.perf_counter() - start < 300


@pytest.mark.slow
class TestPerformance:

    def test_ten_thousand_cells_thousand_directions(self):
        rng = rng_for(10)
        f = random_function_2d(rng, size=41, density=1.0)
        cells = list(f.cells())
        assert len(cells) >= 10_000
        directions = random_directions(rng, 2, 1000)

        start = time.perf_counter()
        table = ect_sweep(f, directions)
        assert time.perf_counter() - start < 60
        assert len(table) == 1000

        for direction, curve in list(zip(table.directions, table.curves))[:3]:
            jumps = [
                (max(dot(p, direction.nu) for p in points), weight * (-1) ** (len(points) - 1))
                for points, weight in cells
            ]
            assert curve == StepFunction.from_jumps(0, jumps)
            assert all(isinstance(b, Fraction) for b in curve.breakpoints)
