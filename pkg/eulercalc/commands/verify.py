"""
Theorem verification suite.

Runs every identity the engine claims (1-D Schapira inversion, the classification theorem and its
corollary, the quadric compositions, fiber characteristics, Fubini) on the bundled fixtures and on
seeded random instances, and reports one CheckResult per theorem.
"""

import logging
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, Optional

sys.path.insert(0, str(Path(__file__).parent.parent.parent))

import numpy as np

from eulercalc.lib.ect import (
    S0_DIRECTIONS,
    classify_pair,
    corollary_check,
    curves_differ,
    dual_transform_1d,
    ect_curve,
    ect_sweep,
    reconstruct_1d,
    schapira_identity_check_1d,
)
from eulercalc.lib.euler_core import (
    closure_indicator,
    euler_integral,
    fubini_check,
    point_evaluate,
    sample_points_1d,
    with_ambient,
)
from eulercalc.lib.formats import (
    parse_directions,
    parse_function,
    parse_pairs,
    parse_probes,
    parse_queries,
    parse_step_function,
    read_text,
    serialize_directions,
    serialize_function,
    serialize_pairs,
    serialize_probes,
    serialize_queries,
    serialize_step_function,
)
from eulercalc.lib.geometry import is_affinely_independent
from eulercalc.lib.models import (
    ConstructibleFunction,
    DirectionProbe,
    KernelFamily,
    KernelKind,
    QuadricProbe,
    SymMatrix,
)
from eulercalc.lib.qect import (
    compose_fixed_a,
    compose_v0,
    interpolation_remark_check,
    qect_curve_1d_support,
    qect_eval_exact,
    reflect,
    thm47_bound_check,
)
from eulercalc.lib.radon import compose_lemma42, fiber_char_report, kernel_partition
from eulercalc.lib.spectral import (
    bilinear,
    certified_opnorm_bound,
    is_eigenvalue,
    opnorm_interval,
)
from eulercalc.lib.step_function import assert_right_continuous
from eulercalc.utils.config import RunConfig
from eulercalc.utils.io import emit
from eulercalc.utils.sampling import (
    perturb_one_weight,
    random_direction,
    random_directions,
    random_function,
    random_function_1d,
    random_function_2d,
    random_low_dim_function,
    random_point,
    random_point_in_ball,
    random_rational,
    random_sym_matrix,
    random_weight,
    rng_for,
)

logger = logging.getLogger(__name__)

COMMAND_NAME = 'verify'

FIXTURES_DIR = Path(__file__).resolve().parent.parent.parent / "fixtures"

FIXTURE_FORMATS = {
    "whole_space_r3.json": (parse_function, serialize_function),
    "closed_segment.json": (parse_function, serialize_function),
    "point_pair_r2.json": (parse_function, serialize_function),
    "closed_segment_ect.json": (parse_step_function, serialize_step_function),
    "directions_s0.json": (parse_directions, serialize_directions),
    "probes_unit_disk.json": (parse_probes, serialize_probes),
    "pairs_r2.json": (parse_pairs, serialize_pairs),
    "queries_1d.json": (parse_queries, serialize_queries),
}


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    trials: int
    failures: int
    detail: str

    def to_record(self) -> dict:
        # no timings: the same seed must give the same bytes
        return {
            "check": self.name,
            "passed": self.passed,
            "trials": self.trials,
            "failures": self.failures,
            "detail": self.detail,
        }


class _Tally:
    """Counts trials and failures; keeps the first failure message."""

    def __init__(self):
        self.trials = 0
        self.failures = 0
        self.first = ""

    def record(self, ok: bool, message: str = "") -> None:
        self.trials += 1
        if not ok:
            self.failures += 1
            self.first = self.first or message


def _timed(name: str, check: Callable[[], _Tally]) -> CheckResult:
    start = time.perf_counter()
    try:
        tally = check()
        detail = tally.first
        passed = tally.failures == 0
        trials, failures = tally.trials, tally.failures
    except Exception as e:
        logger.error(f"Check {name} raised: {e}")
        passed, trials, failures, detail = False, 0, 1, f"{type(e).__name__}: {e}"
    seconds = time.perf_counter() - start
    status = "✓" if passed else "✗"
    logger.info(f"{status} {name}: {trials - failures}/{trials} in {seconds:.2f}s")
    return CheckResult(name, passed, trials, failures, detail)


def _curves_right_continuous(curves, tally: _Tally, label: str) -> None:
    for curve in curves:
        try:
            assert_right_continuous(curve, label)
            tally.record(True)
        except AssertionError as e:
            tally.record(False, str(e))


def check_bundled_examples() -> _Tally:
    tally = _Tally()
    whole = parse_function(read_text(FIXTURES_DIR / "whole_space_r3.json"))
    tally.record(euler_integral(whole) == -1, "χ(1_{R^3}) != -1")

    segment = parse_function(read_text(FIXTURES_DIR / "closed_segment.json"))
    curve = ect_curve(segment, DirectionProbe.of([1]))
    tally.record(curve.breakpoints == (Fraction(-1),) and curve.values == (0, 1),
                 f"ECT of the closed segment is {curve}")

    expected = parse_step_function(read_text(FIXTURES_DIR / "closed_segment_ect.json"))
    tally.record(curve == expected, "closed-segment curve differs from its stored fixture")

    for name, (parse, serialize) in FIXTURE_FORMATS.items():
        text = read_text(FIXTURES_DIR / name)
        tally.record(serialize(parse(text)) == text, f"{name} does not round-trip")
    return tally


def _queries_1d(rng, h: ConstructibleFunction, count: int) -> list[Fraction]:
    """The cell sample points of h, topped up with random rationals to count queries."""
    queries = sample_points_1d(h)[:count]
    return queries + [random_rational(rng, -12, 12, 7) for _ in range(count - len(queries))]


def check_schapira_1d(
    rng, compact: int, non_compact: Optional[int] = None, queries: int = 100
) -> _Tally:
    """
    Schapira identity on `compact` functions without an ambient term, then on `non_compact`
    functions with a nonzero ambient coefficient (compact // 5 by default).
    """
    tally = _Tally()
    if non_compact is None:
        non_compact = max(1, compact // 5)
    for i in range(compact + non_compact):
        ambient = random_weight(rng) if i >= compact else 0
        h = random_function_1d(rng, ambient_coeff=ambient)
        report = schapira_identity_check_1d(h, _queries_1d(rng, h, queries))
        tally.record(report.holds, f"identity fails at {report.failures[:3]}")
        _curves_right_continuous(ect_sweep(h, S0_DIRECTIONS).curves, tally, "schapira")
    return tally


def check_composition_1d(rng, trials: int) -> _Tally:
    """The generic partition evaluator for the linear kernel on R against the dual transform."""
    tally = _Tally()
    partition, chi_p = kernel_partition(KernelKind.ect_linear(1))
    for i in range(trials):
        ambient = random_weight(rng) if i % 5 == 4 else 0
        h = random_function_1d(rng, ambient_coeff=ambient)
        evaluate = compose_lemma42(h, partition, chi_p)
        table = ect_sweep(h, S0_DIRECTIONS)
        bad = [q for q in _queries_1d(rng, h, 20) if evaluate(q) != dual_transform_1d(table, q)]
        tally.record(not bad, f"partition composition and dual transform differ at {bad[:3]}")
    return tally


def check_inversion_1d(rng, trials: int) -> _Tally:
    tally = _Tally()
    for _ in range(trials):
        h = random_function_1d(rng)
        reconstructed = reconstruct_1d(ect_sweep(h, S0_DIRECTIONS))
        queries = sample_points_1d(h) + [random_rational(rng, -12, 12, 5) for _ in range(10)]
        bad = [q for q in queries if reconstructed(q) != point_evaluate(h, (q,))]
        tally.record(not bad, f"reconstruction fails at {bad[:3]}")
    return tally


def check_classification(rng, trials: int, direction_count: int = 10) -> _Tally:
    tally = _Tally()
    for i in range(trials):
        n = 1 + i % 3
        f = random_function(rng, n)
        directions = random_directions(rng, n, direction_count)
        c = random_weight(rng)
        g = with_ambient(f, c)
        same = classify_pair(f, g) == c and not curves_differ(f, g, directions)
        tally.record(same, f"f vs f + {c}·1 on R^{n} not classified as equal")

        perturbed = perturb_one_weight(rng, f)
        distinct = classify_pair(f, perturbed) is None and bool(curves_differ(f, perturbed, directions))
        tally.record(distinct, f"perturbed pair on R^{n} not separated")
        _curves_right_continuous(ect_sweep(f, directions).curves, tally, "classification")
    return tally


def check_corollary(rng, trials: int) -> _Tally:
    tally = _Tally()
    for n in (1, 2, 3):
        whole = ConstructibleFunction.constant(n, 1)
        empty = ConstructibleFunction.zero(n)
        verdict = corollary_check(whole, empty)
        tally.record(verdict.equal_ect and verdict.c == -1 and verdict.holds, f"(R^{n}, ∅) verdict wrong")
        verdict = corollary_check(whole, whole)
        tally.record(verdict.equal_ect and verdict.c == 0, f"(R^{n}, R^{n}) verdict wrong")
        for _ in range(max(1, trials // 3)):
            points = [random_point(rng, n) for _ in range(n + 1)]
            if not is_affinely_independent(points):
                continue
            simplex = closure_indicator(points)
            verdict = corollary_check(simplex, empty)
            tally.record(not verdict.equal_ect and verdict.holds, "closed simplex vs ∅ has equal ECT")

        for _ in range(max(1, trials // 3)):
            curve = ect_curve(whole, random_direction(rng, n))
            tally.record(curve.is_zero(), f"ECT(1_{{R^{n}}}) is not zero")
    return tally


def check_compose_v0(rng, trials: int) -> _Tally:
    tally = _Tally()
    partition, chi_p = kernel_partition(KernelKind.quadric_v0(2))
    for i in range(trials):
        p = random_point(rng, 2)
        cells = [((p,), random_weight(rng))]
        if i % 2 == 0:
            cells.append(((tuple(-c for c in p),), random_weight(rng)))
        base = random_low_dim_function(rng, 2, cells=2)
        h = ConstructibleFunction.from_cells(2, list(base.cells()) + cells)
        evaluator = compose_lemma42(h, partition, chi_p)
        for x_prime in (p, tuple(-c for c in p), random_point(rng, 2)):
            tally.record(compose_v0(h, x_prime) == evaluator(x_prime),
                         f"compose_v0 and the ±diagonal composition differ at {x_prime}")
    return tally


def check_sign_symmetry(rng, trials: int) -> _Tally:
    tally = _Tally()
    for i in range(trials):
        n = 1 + i % 2
        f = random_low_dim_function(rng, n)
        A = random_sym_matrix(rng, n)
        if A.is_zero():
            continue
        probe = QuadricProbe(A, tuple(Fraction(0) for _ in range(n)), random_rational(rng, -6, 6))
        tally.record(qect_eval_exact(f, probe) == qect_eval_exact(reflect(f), probe),
                     "QECT differs between f and its reflection for v = 0")
        curve = qect_curve_1d_support(f, A, probe.v)
        _curves_right_continuous([curve.as_step_function()], tally, "qect")
    return tally


def _float_opnorm(A: SymMatrix) -> float:
    matrix = np.array([[float(c) for c in row] for row in A.entries])
    return float(np.max(np.abs(np.linalg.eigvalsh(matrix))))


def eigvalsh_below(A: SymMatrix, r: Fraction, tolerance: float = 1e-9) -> bool:
    """
    ||A||_op < r by numpy's eigvalsh. Inside the tolerance the float answer is not trusted: an
    exact eigenvalue at ±r settles a tie, anything else is bracketed by refined root isolation.
    """
    margin = _float_opnorm(A) - float(r)
    if abs(margin) > tolerance:
        return margin < 0
    if is_eigenvalue(A, r) or is_eigenvalue(A, -r):
        return False
    resolution = Fraction(1, 10**9)
    while True:
        lo, hi = opnorm_interval(A, resolution)
        if hi < r:
            return True
        if lo >= r:
            return False
        resolution /= 1000


def check_fixed_a(rng, trials: int) -> _Tally:
    tally = _Tally()
    tally.record(interpolation_remark_check(2, [Fraction(0), Fraction(1), Fraction(5)]),
                 "interpolation limits of the fixed-A bound are wrong")
    for i in range(trials):
        n = int(rng.integers(1, 6))
        R = Fraction(int(rng.integers(1, 5)), 2)
        bound = 1 / (1 + 2 * R * R)
        if i % 10 == 9:
            # norm exactly at the bound
            A = SymMatrix.diag([-bound if rng.random() < 0.5 else bound] + [bound / 2] * (n - 1))
        else:
            A = random_sym_matrix(rng, n).scaled(bound / int(rng.integers(2, 12)))
        exact = thm47_bound_check(A, R)
        tally.record(exact == eigvalsh_below(A, bound), f"bound check disagrees with eigvalsh for R = {R}")
        if not exact:
            continue
        r = certified_opnorm_bound(A, bound)
        for _ in range(5):
            x = random_point_in_ball(rng, n, R)
            y = random_point_in_ball(rng, n, R)
            value = bilinear(A, tuple(a + b for a, b in zip(y, x)), tuple(b - a for a, b in zip(x, y)))
            tally.record(abs(value) < 1 - r, f"|(x'+x)ᵀA(x'-x)| >= 1 - r for R = {R}")

    zero = SymMatrix.zeros(1)
    for _ in range(trials):
        h = random_function_1d(rng)
        queries = sample_points_1d(h)
        expected = schapira_identity_check_1d(h, queries)
        got = tuple(compose_fixed_a(h, zero, Fraction(10), (q,)) for q in queries)
        tally.record(got == expected.rhs, "compose_fixedA with A = 0 differs from the 1-D closed form")
    return tally


FIBER_KINDS = (
    KernelKind.ect_linear(2),
    KernelKind.ect_linear(3),
    KernelKind.quadric_v0(2),
    KernelKind.quadric_fixed_a(SymMatrix.of([["1/10", "1/20"], ["1/20", "-1/12"]]), 1),
    KernelKind.quadric_fixed_a(SymMatrix.diag(["1/5", "-1/10"]), Fraction(1, 2)),
    KernelKind.quadric_fixed_a(SymMatrix.of([["1/20", "1/40"], ["1/40", "-1/24"]]), 2),
    KernelKind.quadric_fixed_a(
        SymMatrix.of([["1/10", 0, "1/20"], [0, "-1/12", 0], ["1/20", 0, "1/20"]]), 1
    ),
)


def check_fiber_chi(rng, trials: int, refinement: int) -> _Tally:
    tally = _Tally()
    stable = 0
    total = 0
    for kind in FIBER_KINDS:
        R = kind.R if kind.family is KernelFamily.QUADRIC_FIXED_A else Fraction(1)
        for i in range(trials):
            x = random_point_in_ball(rng, kind.n, R)
            if i % 4 == 0:
                y = x
            elif i % 4 == 1 and kind.family is KernelFamily.QUADRIC_V0:
                y = tuple(-c for c in x)
            else:
                y = random_point_in_ball(rng, kind.n, R)
            report = fiber_char_report(kind, x, y, refinement)
            total += 1
            stable += report.oracle_stable
            tally.record(report.agrees, f"{kind.family.value}: mesh χ {report.oracle_chi} "
                                        f"!= analytic {report.analytic_chi}")
    tally.record(stable >= 0.95 * total, f"only {stable}/{total} oracle runs stabilised")
    return tally


def check_fubini(rng, trials: int) -> _Tally:
    tally = _Tally()
    for _ in range(trials):
        f = random_function_2d(rng, ambient_coeff=int(rng.integers(-2, 3)))
        lhs, rhs = fubini_check(f)
        tally.record(lhs == rhs, f"Fubini fails: {lhs} != {rhs}")
    return tally


def run_checks(seed: int, trials: int, refinement: int) -> list[CheckResult]:
    rng = rng_for(seed)
    return [
        _timed("bundled_examples", check_bundled_examples),
        _timed("schapira_1d", lambda: check_schapira_1d(rng, trials)),
        _timed("inversion_1d", lambda: check_inversion_1d(rng, trials)),
        _timed("composition_1d", lambda: check_composition_1d(rng, trials)),
        _timed("classification", lambda: check_classification(rng, trials)),
        _timed("corollary", lambda: check_corollary(rng, trials)),
        _timed("compose_v0", lambda: check_compose_v0(rng, trials)),
        _timed("qect_sign_symmetry", lambda: check_sign_symmetry(rng, trials)),
        _timed("fixed_a_composition", lambda: check_fixed_a(rng, trials)),
        _timed("fiber_chi", lambda: check_fiber_chi(rng, max(1, trials // 2), min(refinement, 4))),
        _timed("fubini", lambda: check_fubini(rng, trials)),
    ]


def run_verify(config: RunConfig) -> int:
    """
    Run the full theorem suite.

    Returns:
        int: 0 if every check passes, 1 otherwise
    """
    logger.info(f"Running theorem suite (seed={config.seed}, trials={config.trials})")
    results = run_checks(config.seed, config.trials, config.refine_max)
    emit(config, [r.to_record() for r in results])

    failed = [r.name for r in results if not r.passed]
    if failed:
        logger.error(f"Failed checks: {', '.join(failed)}")
        return 1
    logger.info(f"✓ All {len(results)} checks passed")
    return 0


if __name__ == "__main__":
    from eulercalc.main import main
    sys.exit(main([COMMAND_NAME] + sys.argv[1:]))
