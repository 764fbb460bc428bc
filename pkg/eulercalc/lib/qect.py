"""
Quadric Euler characteristic transform.

QECT(f)(A, v, t) = ∫ f(x)·1{xᵀAx + v·x <= t} dχ. Exact on supports of dimension <= 1 (a quadric
restricted to a segment is a univariate quadratic), with a piecewise-linear estimate for higher
dimensional cells, plus the closed-form compositions of the two quadric inversion theorems.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import (
    BoundViolationError,
    DimensionMismatchError,
    SupportEscapesBallError,
    UnsupportedAmbientError,
    WrongOperationError,
)
from .euler_core import euler_integral, point_evaluate, reflect
from .models import ConstructibleFunction, Definiteness, OpNormOrder, QuadricProbe, SymMatrix
from .rational import Point, add, dot, norm_squared, scale, sign, sub, to_point, to_rational
from .spectral import bilinear, definiteness, opnorm_compare, quadric_extremum
from .step_function import StepFunction
from .subdivision import interior_faces

logger = logging.getLogger(__name__)

__all__ = [
    "AlgebraicBreakpoint",
    "PlEstimate",
    "QectCurve",
    "compose_fixed_a",
    "compose_v0",
    "interpolation_remark_check",
    "qect_curve_1d_support",
    "qect_eval_exact",
    "qect_eval_pl",
    "quadric_value",
    "reflect",
    "thm47_bound_check",
]


def quadric_value(A: SymMatrix, v: Sequence[Fraction], x) -> Fraction:
    """xᵀAx + v·x, exactly."""
    x = to_point(x)
    if A.n != len(x) or len(v) != len(x):
        raise DimensionMismatchError(f"Quadric on R^{A.n} evaluated at a point of R^{len(x)}")
    return bilinear(A, x, x) + dot(v, x)


def thm47_bound_check(A: SymMatrix, R) -> bool:
    """||A||_op < 1/(1 + 2R²), decided exactly."""
    R = to_rational(R)
    return opnorm_compare(A, 1 / (1 + 2 * R * R)) is OpNormOrder.LESS


def _check_dims(f: ConstructibleFunction, A: SymMatrix) -> None:
    if A.n != f.ambient_dim:
        raise DimensionMismatchError(f"Probe lives on R^{A.n}, function on R^{f.ambient_dim}")


def _ambient_term(f: ConstructibleFunction, probe: QuadricProbe) -> int:
    """c·χ_c({q <= t}) for the ambient part, where a closed form exists."""
    c = f.ambient_coeff
    if c == 0:
        return 0
    kind = definiteness(probe.A)
    if kind is Definiteness.ZERO:
        # a closed half-space: χ_c = 0
        return 0
    if kind is Definiteness.POSITIVE:
        return c if probe.t >= quadric_extremum(probe.A, probe.v) else 0
    if kind is Definiteness.NEGATIVE:
        # complement of an open ellipsoid, all of R^n once t reaches the maximum
        return c * (-1) ** f.ambient_dim if probe.t >= quadric_extremum(probe.A, probe.v) else 0
    raise UnsupportedAmbientError(
        "Ambient coefficient under an indefinite or singular quadric has no closed-form sublevel χ"
    )


@dataclass(frozen=True)
class _SegmentQuadratic:
    """g(s) = alpha·s² + beta·s + gamma, the quadric along a + s(b - a)."""
    alpha: Fraction
    beta: Fraction
    gamma: Fraction

    @classmethod
    def along(cls, A: SymMatrix, v: Point, a: Point, b: Point) -> "_SegmentQuadratic":
        d = sub(b, a)
        return cls(
            alpha=bilinear(A, d, d),
            beta=2 * bilinear(A, a, d) + dot(v, d),
            gamma=bilinear(A, a, a) + dot(v, a),
        )

    def __call__(self, s: Fraction) -> Fraction:
        return (self.alpha * s + self.beta) * s + self.gamma

    @property
    def vertex(self) -> Optional[Fraction]:
        return -self.beta / (2 * self.alpha) if self.alpha else None

    def critical_values(self) -> list[Fraction]:
        values = [self(Fraction(0)), self(Fraction(1))]
        s_star = self.vertex
        if s_star is not None and 0 < s_star < 1:
            values.append(self(s_star))
        return values


def _region(h: _SegmentQuadratic, s: Fraction) -> int:
    """Position of s among (-inf, r1), {r1}, (r1, r2), {r2}, (r2, inf) for two real roots r1 < r2."""
    s_star = h.vertex
    value = sign(h(s))
    if value == 0:
        return 1 if s < s_star else 3
    if value == -sign(h.alpha):
        return 2
    return 0 if s < s_star else 4


def _open_segment_sublevel_chi(h: _SegmentQuadratic) -> int:
    """χ_c({s ∈ (0, 1) : h(s) <= 0}): each point of the set counts +1, each open interval -1."""
    zero, one = Fraction(0), Fraction(1)
    if h.alpha == 0:
        if h.beta == 0:
            return -1 if h.gamma <= 0 else 0
        cuts = [zero, one]
        root = -h.gamma / h.beta
        if 0 < root < 1:
            cuts.insert(1, root)
        points = sum(1 for p in cuts[1:-1] if h(p) <= 0)
        gaps = sum(1 for a, b in zip(cuts, cuts[1:]) if h((a + b) / 2) <= 0)
        return points - gaps

    discriminant = h.beta * h.beta - 4 * h.alpha * h.gamma
    if discriminant < 0:
        return -1 if h.alpha < 0 else 0
    if discriminant == 0:
        if h.alpha < 0:
            return -1
        return 1 if 0 < h.vertex < 1 else 0

    start = _region(h, zero)
    start = start + 1 if start in (1, 3) else start
    end = _region(h, one)
    end = end - 1 if end in (1, 3) else end
    chi = 0
    for region in range(start, end + 1):
        if region % 2:
            chi += 1
        elif (-sign(h.alpha) if region == 2 else sign(h.alpha)) < 0:
            chi -= 1
    return chi


def _require_low_dimension(f: ConstructibleFunction) -> None:
    if f.max_cell_dimension >= 2:
        raise WrongOperationError(
            f"Exact QECT needs cells of dimension <= 1, found dimension {f.max_cell_dimension}; "
            "use qect_eval_pl"
        )


def qect_eval_exact(f: ConstructibleFunction, probe: QuadricProbe) -> int:
    """
    Exact QECT(f)(A, v, t) for f supported on points and open segments.

    Raises:
        DimensionMismatchError: probe and function live in different R^n
        WrongOperationError: f has a cell of dimension >= 2
        UnsupportedAmbientError: nonzero ambient coefficient under an indefinite or singular A
    """
    _check_dims(f, probe.A)
    _require_low_dimension(f)
    total = _ambient_term(f, probe)
    for points, weight in f.cells():
        if len(points) == 1:
            if quadric_value(probe.A, probe.v, points[0]) <= probe.t:
                total += weight
        else:
            g = _SegmentQuadratic.along(probe.A, probe.v, points[0], points[1])
            shifted = _SegmentQuadratic(g.alpha, g.beta, g.gamma - probe.t)
            total += weight * _open_segment_sublevel_chi(shifted)
    return total


@dataclass(frozen=True)
class AlgebraicBreakpoint:
    """A real root of the polynomial with the given coefficients (highest degree first),
    isolated in the closed rational interval [lower, upper]."""
    coefficients: tuple[Fraction, ...]
    lower: Fraction
    upper: Fraction

    @classmethod
    def rational(cls, value: Fraction) -> "AlgebraicBreakpoint":
        return cls((Fraction(1), -value), value, value)

    @property
    def is_rational(self) -> bool:
        return self.lower == self.upper

    @property
    def value(self) -> Fraction:
        if not self.is_rational:
            raise WrongOperationError("Breakpoint is not isolated to a single rational")
        return self.lower


@dataclass(frozen=True)
class QectCurve:
    """t ↦ QECT(f)(A, v, t) for fixed (A, v)."""
    breakpoints: tuple[AlgebraicBreakpoint, ...]
    values: tuple[int, ...]

    def as_step_function(self) -> StepFunction:
        return StepFunction(tuple(b.value for b in self.breakpoints), self.values)

    def __call__(self, t) -> int:
        return self.as_step_function()(to_rational(t))


def qect_curve_1d_support(f: ConstructibleFunction, A: SymMatrix, v) -> QectCurve:
    """
    The full t-curve of QECT(f)(A, v, ·) for f supported on points and open segments.

    The topology of the sublevel set inside a cell changes only at q(p) for a point cell and
    at g(0), g(1) and g(s*) for a segment cell, so every breakpoint is rational. Values are
    sampled just right of each breakpoint.
    """
    v = to_point(v)
    _check_dims(f, A)
    _require_low_dimension(f)

    critical = set()
    for points, _ in f.cells():
        if len(points) == 1:
            critical.add(quadric_value(A, v, points[0]))
        else:
            critical.update(_SegmentQuadratic.along(A, v, points[0], points[1]).critical_values())
    if f.ambient_coeff and definiteness(A) in (Definiteness.POSITIVE, Definiteness.NEGATIVE):
        critical.add(quadric_extremum(A, v))

    ordered = sorted(critical)
    if not ordered:
        value = qect_eval_exact(f, QuadricProbe(A, v, Fraction(0)))
        return QectCurve((), (value,))

    def at(t: Fraction) -> int:
        return qect_eval_exact(f, QuadricProbe(A, v, t))

    right_samples = [(a + b) / 2 for a, b in zip(ordered, ordered[1:])] + [ordered[-1] + 1]
    values = [at(ordered[0] - 1)] + [at(s) for s in right_samples]
    for t, s in zip(ordered, right_samples):
        if at(t) != at(s):
            logger.warning(f"QECT value at breakpoint {t} differs from the value just right of it")

    step = StepFunction.from_samples(ordered, values)
    logger.debug(f"QECT curve has {len(step.breakpoints)} breakpoints")
    return QectCurve(
        tuple(AlgebraicBreakpoint.rational(t) for t in step.breakpoints), step.values
    )


@dataclass(frozen=True)
class PlEstimate:
    estimate: int
    stable: bool
    level: int


def _pl_cell_count(points: tuple[Point, ...], probe: QuadricProbe, level: int) -> int:
    """Max-vertex rule over the open cells of the subdivided simplex inside its relative interior."""
    cache: dict[Point, Fraction] = {}

    def value(bary: Point) -> Fraction:
        if bary not in cache:
            x = tuple(Fraction(0) for _ in points[0])
            for weight, p in zip(bary, points):
                x = add(x, scale(weight, p))
            cache[bary] = quadric_value(probe.A, probe.v, x)
        return cache[bary]

    count = 0
    for face in interior_faces(len(points) - 1, level):
        if max(value(w) for w in face) <= probe.t:
            count += (-1) ** (len(face) - 1)
    return count


def _pl_estimate_at(f: ConstructibleFunction, probe: QuadricProbe, level: int) -> int:
    total = _ambient_term(f, probe)
    for points, weight in f.cells():
        total += weight * _pl_cell_count(points, probe, level)
    return total


def qect_eval_pl(f: ConstructibleFunction, probe: QuadricProbe, max_level: int) -> PlEstimate:
    """
    Piecewise-linear estimate of QECT(f)(probe) on iterated barycentric subdivisions.

    Each open cell of the refined mesh inside relint σ counts (-1)^dim when all its vertices lie
    in the sublevel set. Stops at the first level agreeing with the previous one.

    Args:
        f: any constructible function
        probe: quadric probe on R^n
        max_level: refinement cap

    Returns:
        PlEstimate(estimate, stable, level)
    """
    _check_dims(f, probe.A)
    previous = _pl_estimate_at(f, probe, 0)
    for level in range(1, max_level + 1):
        current = _pl_estimate_at(f, probe, level)
        logger.debug(f"PL QECT level {level}: {current}")
        if current == previous:
            return PlEstimate(current, True, level)
        previous = current
    logger.warning(f"PL QECT estimate not stable up to level {max_level}")
    return PlEstimate(previous, False, max_level)


def compose_v0(h: ConstructibleFunction, x_prime) -> int:
    """(R_{K'} ∘ R_K)h(x') for the v = 0 quadric kernel: (μ - 1)·Σ_{z ∈ {±x'}} h(z) + ∫ h dχ."""
    x_prime = to_point(x_prime)
    d = len(x_prime) * (len(x_prime) + 1) // 2
    mu = 1 + (-1) ** (d - 1)
    mirrored = tuple(-c for c in x_prime)
    antipodes = {x_prime, mirrored}
    return (mu - 1) * sum(point_evaluate(h, z) for z in antipodes) + euler_integral(h)


def _check_support_in_ball(h: ConstructibleFunction, R: Fraction) -> None:
    if h.ambient_coeff:
        raise SupportEscapesBallError("Function has a nonzero ambient coefficient")
    for points, _ in h.cells():
        for p in points:
            if norm_squared(p) > R * R:
                raise SupportEscapesBallError(f"Vertex {p} lies outside B_{R}(0)")


def compose_fixed_a(h: ConstructibleFunction, A: SymMatrix, R, x_prime) -> int:
    """
    (R_{K'} ∘ R_K)h(x') for the fixed-A quadric kernel: (-1)^{n-1}·h(x') + ∫ h dχ.

    Raises:
        BoundViolationError: ||A||_op >= 1/(1 + 2R²)
        SupportEscapesBallError: h is not supported in the closed ball B_R(0)
    """
    R = to_rational(R)
    if not thm47_bound_check(A, R):
        raise BoundViolationError(f"||A||_op < 1/(1 + 2R²) fails for R = {R}")
    _check_support_in_ball(h, R)
    x_prime = to_point(x_prime)
    n = len(x_prime)
    return (-1) ** (n - 1) * point_evaluate(h, x_prime) + euler_integral(h)


def interpolation_remark_check(n: int, radii: Sequence) -> bool:
    """A = 0 passes the fixed-A bound for every R; a norm-one A (e.g. diag(1, 0, ...)) for none."""
    zero = SymMatrix.zeros(n)
    unit = SymMatrix.diag([1] + [0] * (n - 1))
    return all(thm47_bound_check(zero, R) for R in radii) and not any(
        thm47_bound_check(unit, R) for R in radii
    )

