"""
Euler characteristic transform, its classification theory and the 1-D dual transform.

A weighted open simplex a·1_{relint σ} contributes a·(-1)^{dim σ}·1{t >= M} to ECT(f)(ν, ·),
where M is the largest projection ν·w over the vertices w of σ. The ambient term contributes
nothing: {x·ν <= t} has χ = χ(R^{n-1}) + χ(R^n) = 0.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import (
    DimensionMismatchError,
    DirectionSetError,
    InconsistentTableError,
    NeedsCommonTriangulationError,
    NonIndicatorError,
)
from .euler_core import (
    euler_integral,
    euler_integral_1d,
    is_constant_1d,
    level_sets,
    point_evaluate,
    reflect,
    restrict_to_line,
)
from .geometry import relint_overlap, segment_intersection_2d
from .models import ConstructibleFunction, DirectionProbe, EctTable, Line2D
from .rational import Point, common_denominator, dot, to_rational
from .step_function import StepFunction

logger = logging.getLogger(__name__)

# int64 headroom for the vectorised projection path
_INT64_SAFE = 2 ** 62


def ect_cell_curve(points: Sequence[Point], weight: int, direction: DirectionProbe) -> StepFunction:
    """Curve of weight·1_{relint σ}: a single jump of weight·(-1)^dim at max_w ν·w."""
    top = max(dot(p, direction.nu) for p in points)
    return StepFunction.indicator_from(top, weight * (-1) ** (len(points) - 1))


class _CellArrays:
    """Integer-scaled vertex coordinates and per-dimension cell tables of a function."""

    def __init__(self, f: ConstructibleFunction):
        self.ambient_dim = f.ambient_dim
        cells = list(f.cells())
        coords = [c for points, _ in cells for p in points for c in p]
        self.scale = common_denominator(coords)
        vertex_index: dict[Point, int] = {}
        groups: dict[int, tuple[list, list]] = {}
        for points, weight in cells:
            row = []
            for p in points:
                if p not in vertex_index:
                    vertex_index[p] = len(vertex_index)
                row.append(vertex_index[p])
            rows, jumps = groups.setdefault(len(points), ([], []))
            rows.append(row)
            jumps.append(weight * (-1) ** (len(points) - 1))

        scaled = [[int(c * self.scale) for c in p] for p in vertex_index]
        self.max_coord = max((abs(c) for row in scaled for c in row), default=0)
        dtype = np.int64 if self.max_coord < 2 ** 31 else object
        self.vertices = np.array(scaled, dtype=dtype).reshape(len(scaled), self.ambient_dim)
        self.groups = [
            (np.array(rows, dtype=np.int64), np.array(jumps, dtype=np.int64))
            for rows, jumps in groups.values()
        ]

    def curve(self, direction: DirectionProbe) -> StepFunction:
        if not self.groups:
            return StepFunction.zero()
        nu_scale = common_denominator(direction.nu)
        nu = [int(c * nu_scale) for c in direction.nu]
        bound = self.max_coord * max(abs(c) for c in nu) * self.ambient_dim
        if self.vertices.dtype == object or bound >= _INT64_SAFE:
            projections = self.vertices.astype(object).dot(np.array(nu, dtype=object))
        else:
            projections = self.vertices.dot(np.array(nu, dtype=np.int64))

        tops = np.concatenate([projections[rows].max(axis=1) for rows, _ in self.groups])
        jumps = np.concatenate([j for _, j in self.groups])
        levels, inverse = np.unique(tops, return_inverse=True)
        totals = np.zeros(len(levels), dtype=np.int64)
        np.add.at(totals, inverse.reshape(-1), jumps)

        denominator = self.scale * nu_scale
        breakpoints = []
        values = [0]
        for level, total in zip(levels, totals):
            if total:
                breakpoints.append(Fraction(int(level), denominator))
                values.append(values[-1] + int(total))
        return StepFunction(tuple(breakpoints), tuple(values))


def _check_direction(f: ConstructibleFunction, direction: DirectionProbe) -> None:
    if direction.dim != f.ambient_dim:
        raise DimensionMismatchError(
            f"Direction {direction.nu} has dimension {direction.dim}, function lives on R^{f.ambient_dim}"
        )


def ect_curve(f: ConstructibleFunction, direction: DirectionProbe) -> StepFunction:
    """t ↦ ECT(f)(ν, t) as an exact StepFunction; the ambient coefficient contributes zero."""
    _check_direction(f, direction)
    return _CellArrays(f).curve(direction)


def ect_value(f: ConstructibleFunction, direction: DirectionProbe, t) -> int:
    return ect_curve(f, direction)(to_rational(t))


def ect_sweep(f: ConstructibleFunction, directions: Sequence[DirectionProbe], workers: int = 1) -> EctTable:
    """ECT curves for every direction, in input order."""
    for direction in directions:
        _check_direction(f, direction)
    arrays = _CellArrays(f)
    if workers > 1 and len(directions) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            curves = list(pool.map(arrays.curve, directions))
    else:
        curves = [arrays.curve(direction) for direction in directions]
    logger.debug(f"Swept {len(directions)} directions over {sum(1 for _ in f.cells())} cells")
    return EctTable(tuple(directions), tuple(curves))


def mirror_curve(f: ConstructibleFunction, direction: DirectionProbe) -> StepFunction:
    """ECT(f)(-ν, ·) computed as ECT(reflect f)(ν, ·)."""
    return ect_curve(reflect(f), direction)


def curves_differ(f: ConstructibleFunction, g: ConstructibleFunction,
                  directions: Sequence[DirectionProbe]) -> list[DirectionProbe]:
    """Directions on which the ECT curves of f and g differ (falsification cross-check)."""
    ft = ect_sweep(f, directions)
    gt = ect_sweep(g, directions)
    return [d for d, a, b in zip(directions, ft.curves, gt.curves) if a != b]


def _net_cells(f: ConstructibleFunction, g: ConstructibleFunction) -> list[tuple[tuple[Point, ...], int]]:
    """Cells of g - f with weights of geometrically identical cells combined; zeros dropped."""
    totals: dict[frozenset, int] = {}
    shapes: dict[frozenset, tuple[Point, ...]] = {}
    for sign, fn in ((1, g), (-1, f)):
        for points, weight in fn.cells():
            key = frozenset(points)
            shapes.setdefault(key, points)
            totals[key] = totals.get(key, 0) + sign * weight
    return [(shapes[key], w) for key, w in totals.items() if w]


def _is_constant_2d(d: ConstructibleFunction, c: int) -> bool:
    """Exact constancy test on R^2 by slicing along vertical lines.

    Between consecutive critical abscissas (vertices and edge crossings) no two edges cross,
    so one vertical line per open slab and one per critical abscissa cover every face of the
    arrangement.
    """
    segments = []
    abscissas = set()
    for points, _ in d.cells():
        abscissas.update(p[0] for p in points)
        segments.extend(combinations(points, 2))
    for (p1, p2), (q1, q2) in combinations(segments, 2):
        hit = segment_intersection_2d(p1, p2, q1, q2)
        if hit is not None:
            abscissas.add(hit[0])

    ordered = sorted(abscissas)
    if not ordered:
        lines = [Fraction(0)]
    else:
        lines = [ordered[0] - 1, ordered[-1] + 1] + ordered
        lines += [(a + b) / 2 for a, b in zip(ordered, ordered[1:])]
    return all(is_constant_1d(restrict_to_line(d, Line2D.vertical(a)), c) for a in lines)


def classify_pair(f: ConstructibleFunction, g: ConstructibleFunction) -> Optional[int]:
    """
    The integer c with g - f ≡ c, or None when no such c exists.

    By the classification theorem this is Some(c) exactly when ECT(f) = ECT(g).
    Off both (bounded) supports g - f equals the ambient difference, so that is the only
    candidate c.

    Raises:
        DimensionMismatchError: f and g live on different R^n.
        NeedsCommonTriangulationError: n >= 3 and the supports overlap in non-identical cells.
    """
    if f.ambient_dim != g.ambient_dim:
        raise DimensionMismatchError(f"Cannot compare functions on R^{f.ambient_dim} and R^{g.ambient_dim}")
    n = f.ambient_dim
    c = g.ambient_coeff - f.ambient_coeff
    cells = _net_cells(f, g)
    if not cells:
        return c

    difference = ConstructibleFunction.from_cells(n, cells, c)
    if n == 1:
        constant = is_constant_1d(difference, c)
    elif n == 2:
        constant = _is_constant_2d(difference, c)
    else:
        for (a, _), (b, _) in combinations(cells, 2):
            if relint_overlap(a, b):
                raise NeedsCommonTriangulationError(
                    "Supports overlap in non-identical cells; refine both functions on a common triangulation"
                )
        # pairwise-disjoint nonempty cells with nonzero net weight
        constant = False
    return c if constant else None


@dataclass(frozen=True)
class CorollaryVerdict:
    equal_ect: bool
    c: Optional[int]
    s1_is_whole_space: bool
    s2_is_whole_space: bool
    s1_is_empty: bool
    s2_is_empty: bool

    @property
    def holds(self) -> bool:
        """Equal ECT with c != 0 only for the pair (R^n, ∅) in some order."""
        if not self.equal_ect or self.c == 0:
            return True
        return (self.s1_is_whole_space and self.s2_is_empty) or (self.s2_is_whole_space and self.s1_is_empty)


def _require_indicator(f: ConstructibleFunction, label: str) -> None:
    values = set(level_sets(f))
    if not values <= {0, 1}:
        raise NonIndicatorError(f"{label} takes values {sorted(values)}, expected a subset of {{0, 1}}")


def corollary_check(s1: ConstructibleFunction, s2: ConstructibleFunction) -> CorollaryVerdict:
    """Distinct definable sets with equal ECT are R^n and ∅."""
    _require_indicator(s1, "S1")
    _require_indicator(s2, "S2")
    zero = ConstructibleFunction.zero(s1.ambient_dim)
    c = classify_pair(s1, s2)
    constant1 = classify_pair(zero, s1)
    constant2 = classify_pair(zero, s2)
    return CorollaryVerdict(
        equal_ect=c is not None,
        c=c,
        s1_is_whole_space=constant1 == 1,
        s2_is_whole_space=constant2 == 1,
        s1_is_empty=constant1 == 0,
        s2_is_empty=constant2 == 0,
    )


def _signed_pair(table: EctTable) -> list[tuple[int, StepFunction, Fraction]]:
    if len(table) != 2 or any(d.dim != 1 for d in table.directions):
        raise DirectionSetError("The 1-D dual transform needs exactly the two directions ±1 of R^1")
    scalars = [d.nu[0] for d in table.directions]
    if (scalars[0] > 0) == (scalars[1] > 0):
        raise DirectionSetError(f"Directions {scalars} do not cover S^0 = {{+1, -1}}")
    return [(1 if a > 0 else -1, curve, a) for a, curve in zip(scalars, table.curves)]


def dual_transform_1d(table: EctTable, x_prime) -> int:
    """(R_{K'} φ)(x') = Σ_{ν ∈ S^0} ∫_{t <= ν·x'} φ(ν, t) dχ(t).

    A direction a·(±1) with a > 0 carries the curve t ↦ φ(±1, t/a); integrating it up to a·(±x')
    gives the same Euler integral since χ is invariant under the rescaling.
    """
    x_prime = to_rational(x_prime)
    return sum(
        euler_integral_1d(curve, scalar * x_prime) for _, curve, scalar in _signed_pair(table)
    )


def integral_from_table(table: EctTable) -> int:
    """∫ h dχ read from the terminal value of each curve; both must agree."""
    terminals = {curve.terminal_value for _, curve, _ in _signed_pair(table)}
    if len(terminals) != 1:
        raise InconsistentTableError(f"Curves imply different Euler integrals: {sorted(terminals)}")
    return terminals.pop()


def reconstruct_1d(table: EctTable) -> Callable[[Fraction], int]:
    """Pointwise inverse for compactly supported h on R: ĥ(x') = (R_{K'} ECT h)(x') - ∫ h dχ."""
    total = integral_from_table(table)

    def reconstructed(x_prime) -> int:
        return dual_transform_1d(table, x_prime) - total

    return reconstructed


S0_DIRECTIONS = (DirectionProbe((Fraction(1),)), DirectionProbe((Fraction(-1),)))


@dataclass(frozen=True)
class SchapiraReport:
    queries: tuple[Fraction, ...]
    lhs: tuple[int, ...]
    rhs: tuple[int, ...]

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs

    @property
    def failures(self) -> list[Fraction]:
        return [q for q, a, b in zip(self.queries, self.lhs, self.rhs) if a != b]


def schapira_identity_check_1d(h: ConstructibleFunction, queries) -> SchapiraReport:
    """(R_{K'} ∘ R_K)h(x') = h(x') + ∫ h dχ on R (μ = χ(S^0) = 2, λ = 1), with or without compact support."""
    if h.ambient_dim != 1:
        raise DimensionMismatchError("The 1-D Schapira identity needs a function on R")
    queries = tuple(to_rational(q) for q in queries)
    table = ect_sweep(h, S0_DIRECTIONS)
    total = euler_integral(h)
    lhs = tuple(dual_transform_1d(table, q) for q in queries)
    rhs = tuple(point_evaluate(h, (q,)) + total for q in queries)
    return SchapiraReport(queries, lhs, rhs)
