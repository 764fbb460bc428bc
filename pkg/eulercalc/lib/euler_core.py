"""
Constructible functions on simplicial supports and exact Euler integration.

χ is the combinatorial (compactly supported) Euler characteristic: an open k-cell counts (-1)^k.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Optional

from .errors import DimensionMismatchError, WrongOperationError
from .geometry import (
    cross_2d,
    is_affinely_independent,
    relint_contains,
    relint_overlap,
)
from .models import ConstructibleFunction, GeometricComplex, Line2D
from .rational import Point, dot, sub, to_point
from .step_function import StepFunction

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ValidationReport:
    """Affine-dependence failures and relative-interior overlaps of a complex."""
    dependent: tuple[int, ...] = ()
    overlaps: tuple[tuple[int, int], ...] = ()
    overlaps_checked: bool = True
    messages: tuple[str, ...] = field(default_factory=tuple)

    @property
    def valid(self) -> bool:
        return not self.dependent and not self.overlaps


def validate_complex(complex: GeometricComplex, check_overlaps: Optional[bool] = None) -> ValidationReport:
    """
    Check the open-cell partition conditions.

    Args:
        complex: the complex to check
        check_overlaps: pairwise relative-interior test; defaults to on for ambient_dim <= 3

    Returns:
        ValidationReport; valid complexes produce an empty report.
    """
    if check_overlaps is None:
        check_overlaps = complex.ambient_dim <= 3

    messages = []
    dependent = []
    for index, simplex in enumerate(complex.simplices):
        points = complex.simplex_points(index)
        if len(set(simplex)) != len(simplex) or not is_affinely_independent(points):
            dependent.append(index)
            messages.append(f"simplex {index} {simplex} is affinely dependent")

    overlaps = []
    if check_overlaps:
        candidates = [i for i in range(len(complex.simplices)) if i not in dependent]
        for i, j in combinations(candidates, 2):
            si, sj = complex.simplices[i], complex.simplices[j]
            if set(si) == set(sj):
                overlaps.append((i, j))
                messages.append(f"simplices {i} and {j} are the same cell")
                continue
            if set(si) < set(sj) or set(sj) < set(si):
                # a proper face lies in the boundary of the larger cell
                continue
            if relint_overlap(complex.simplex_points(i), complex.simplex_points(j)):
                overlaps.append((i, j))
                messages.append(f"relative interiors of simplices {i} and {j} intersect")

    report = ValidationReport(tuple(dependent), tuple(overlaps), check_overlaps, tuple(messages))
    if not report.valid:
        logger.debug(f"Complex failed validation: {'; '.join(messages)}")
    return report


def closure_expand(complex: GeometricComplex, simplex_index: int, weight: int) -> ConstructibleFunction:
    """weight·1 of the closed simplex, written as weight on each of its open faces.

    Missing faces are appended to the complex; existing ones are reused.
    """
    simplex = complex.simplices[simplex_index]
    existing = {frozenset(s): i for i, s in enumerate(complex.simplices)}
    simplices = list(complex.simplices)
    weights = {}
    for k in range(1, len(simplex) + 1):
        for face in combinations(simplex, k):
            key = frozenset(face)
            if key not in existing:
                existing[key] = len(simplices)
                simplices.append(tuple(face))
            weights[existing[key]] = weight
    expanded = GeometricComplex(complex.ambient_dim, complex.vertices, tuple(simplices))
    return ConstructibleFunction(expanded, weights, 0)


def closure_indicator(points, weight: int = 1) -> ConstructibleFunction:
    """weight·1 of the closed simplex spanned by the given points."""
    points = [to_point(p) for p in points]
    complex = GeometricComplex(len(points[0]), tuple(points), (tuple(range(len(points))),))
    return closure_expand(complex, 0, weight)


def merge(f: ConstructibleFunction, g: ConstructibleFunction) -> ConstructibleFunction:
    """Formal sum f + g on the concatenated complex (cells may overlap)."""
    if f.ambient_dim != g.ambient_dim:
        raise DimensionMismatchError(f"Cannot add functions on R^{f.ambient_dim} and R^{g.ambient_dim}")
    cells = list(f.cells()) + list(g.cells())
    return ConstructibleFunction.from_cells(f.ambient_dim, cells, f.ambient_coeff + g.ambient_coeff)


def scale(f: ConstructibleFunction, c: int) -> ConstructibleFunction:
    return ConstructibleFunction(
        f.complex, {i: c * w for i, w in f.weights.items()}, c * f.ambient_coeff
    )


def negate(f: ConstructibleFunction) -> ConstructibleFunction:
    return scale(f, -1)


def subtract(f: ConstructibleFunction, g: ConstructibleFunction) -> ConstructibleFunction:
    return merge(f, negate(g))


def with_ambient(f: ConstructibleFunction, c: int) -> ConstructibleFunction:
    """f + c·1_{R^n}."""
    return ConstructibleFunction(f.complex, dict(f.weights), f.ambient_coeff + c)


def point_evaluate(f: ConstructibleFunction, x) -> int:
    """f(x): ambient coefficient plus the weight of every cell whose relative interior holds x."""
    x = to_point(x)
    if len(x) != f.ambient_dim:
        raise DimensionMismatchError(f"Point has {len(x)} coordinates, function lives on R^{f.ambient_dim}")
    value = f.ambient_coeff
    for points, weight in f.cells():
        if relint_contains(points, x):
            value += weight
    return value


def euler_integral(f: ConstructibleFunction) -> int:
    """∫ f dχ = c·(-1)^n + Σ_σ a_σ·(-1)^{dim σ}."""
    total = f.ambient_coeff * (-1) ** f.ambient_dim
    for points, weight in f.cells():
        total += weight * (-1) ** (len(points) - 1)
    return total


def euler_integral_1d(phi: StepFunction, upper: Optional[Fraction] = None) -> int:
    """∫ φ·1_{(-inf, upper]} dχ over R; upper=None means +inf.

    Points (breakpoints and the finite upper end) count +1, the open intervals between them -1.
    """
    if upper is None:
        points = list(phi.breakpoints)
    else:
        points = [t for t in phi.breakpoints if t <= upper]
        if not points or points[-1] != upper:
            points.append(upper)

    if not points:
        return -phi.values[0]

    total = -phi(points[0] - 1)
    for a, b in zip(points, points[1:]):
        total += phi(a) - phi((a + b) / 2)
    total += phi(points[-1])
    if upper is None:
        total -= phi.values[-1]
    return total


def _line_parameter(line: Line2D, q: Point) -> Fraction:
    d = line.direction
    return dot(sub(q, line.point), d) / dot(d, d)


def _line_side(line: Line2D, q: Point) -> Fraction:
    return cross_2d(line.direction, sub(q, line.point))


def _crossing_parameter(line: Line2D, a: Point, b: Point, side_a: Fraction, side_b: Fraction) -> Fraction:
    s = side_a / (side_a - side_b)
    q = tuple(a[i] + s * (b[i] - a[i]) for i in range(2))
    return _line_parameter(line, q)


def _cell_on_line(line: Line2D, points: tuple[Point, ...]) -> Optional[tuple[Fraction, ...]]:
    """The trace of an open cell on the line: (s,) for a point, (s0, s1) for an open segment."""
    sides = [_line_side(line, p) for p in points]
    if len(points) == 1:
        return (_line_parameter(line, points[0]),) if sides[0] == 0 else None

    if len(points) == 2:
        a, b = points
        if sides[0] == 0 and sides[1] == 0:
            s0, s1 = sorted((_line_parameter(line, a), _line_parameter(line, b)))
            return (s0, s1)
        if sides[0] * sides[1] < 0:
            return (_crossing_parameter(line, a, b, sides[0], sides[1]),)
        return None

    if len(points) == 3:
        if not (min(sides) < 0 < max(sides)):
            return None
        hits = []
        for i in range(3):
            j = (i + 1) % 3
            if sides[i] == 0:
                hits.append(_line_parameter(line, points[i]))
            elif sides[i] * sides[j] < 0:
                hits.append(_crossing_parameter(line, points[i], points[j], sides[i], sides[j]))
        return (min(hits), max(hits))

    raise WrongOperationError(f"A {len(points) - 1}-cell cannot live in R^2")


def restrict_to_line(f: ConstructibleFunction, line: Line2D) -> ConstructibleFunction:
    """The exact 1-D constructible function s ↦ f(point + s·direction)."""
    if f.ambient_dim != 2:
        raise DimensionMismatchError(f"restrict_to_line needs a function on R^2, got R^{f.ambient_dim}")
    pieces = []
    for points, weight in f.cells():
        trace = _cell_on_line(line, points)
        if trace is not None:
            pieces.append((tuple((s,) for s in trace), weight))
    return ConstructibleFunction.from_cells(1, pieces, f.ambient_coeff)


def critical_abscissas(f: ConstructibleFunction) -> list[Fraction]:
    return sorted({p[0] for points, _ in f.cells() for p in points})


def fiber_function(f: ConstructibleFunction) -> ConstructibleFunction:
    """a ↦ ∫ f|_{x = a} dχ as an exact constructible function on R.

    The fiber integral only changes at vertex abscissas, so one fiber per abscissa and one per
    open gap determine it. Off the support it equals -c (the line carries c·1_R).
    """
    if f.ambient_dim != 2:
        raise DimensionMismatchError("fiber_function is defined for functions on R^2")
    outside = -f.ambient_coeff

    def fiber(a: Fraction) -> int:
        return euler_integral(restrict_to_line(f, Line2D.vertical(a)))

    abscissas = critical_abscissas(f)
    cells = []
    for a in abscissas:
        cells.append((((a,),), fiber(a) - outside))
    for a, b in zip(abscissas, abscissas[1:]):
        cells.append((((a,), (b,)), fiber((a + b) / 2) - outside))
    return ConstructibleFunction.from_cells(1, cells, outside)


def fubini_check(f: ConstructibleFunction) -> tuple[int, int]:
    """(∫ f dχ, ∫ (fiber integrals) dχ) for the first-axis projection; equal by Fubini."""
    return euler_integral(f), euler_integral(fiber_function(f))


def sample_points_1d(f: ConstructibleFunction) -> list[Fraction]:
    """Every vertex, every gap midpoint and one point beyond each end of a function on R."""
    coords = sorted({p[0] for points, _ in f.cells() for p in points})
    if not coords:
        return [Fraction(0)]
    samples = [coords[0] - 1]
    for a, b in zip(coords, coords[1:]):
        samples.extend([a, (a + b) / 2])
    samples.extend([coords[-1], coords[-1] + 1])
    return samples


def is_constant_1d(f: ConstructibleFunction, c: int) -> bool:
    """Exact test that a (possibly formal) function on R is identically c."""
    return all(point_evaluate(f, (s,)) == c for s in sample_points_1d(f))


def level_sets(f: ConstructibleFunction) -> dict[int, list[Optional[int]]]:
    """The decomposition f = Σ n·1_{f^{-1}(n)} on a valid complex.

    Maps each value to the simplex indices carrying it; None stands for the complement of the
    support (present whenever the support is bounded, i.e. always).
    """
    levels: dict[int, list[Optional[int]]] = {f.ambient_coeff: [None]}
    for index in sorted(f.weights):
        weight = f.weights[index]
        if weight:
            levels.setdefault(f.ambient_coeff + weight, []).append(index)
    return levels


def reflect(f: ConstructibleFunction) -> ConstructibleFunction:
    """f ∘ (x ↦ -x): vertex coordinates negated, weights and ambient coefficient kept."""
    vertices = tuple(tuple(-c for c in v) for v in f.complex.vertices)
    complex = GeometricComplex(f.ambient_dim, vertices, f.complex.simplices)
    return ConstructibleFunction(complex, dict(f.weights), f.ambient_coeff)
