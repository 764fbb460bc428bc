"""
Seeded random fixtures with exact rational coordinates.

All randomness flows through a numpy Generator, so a seed fully determines every fixture.
"""

from fractions import Fraction
from itertools import combinations

import numpy as np

from eulercalc.lib.models import ConstructibleFunction, DirectionProbe, SymMatrix
from eulercalc.lib.rational import Point, norm_squared


def rng_for(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def random_rational(rng: np.random.Generator, low: int, high: int, denominator: int = 4) -> Fraction:
    return Fraction(int(rng.integers(low * denominator, high * denominator + 1)), denominator)


def random_weight(rng: np.random.Generator, bound: int = 3) -> int:
    """Nonzero integer weight in [-bound, bound]."""
    weight = int(rng.integers(1, bound + 1))
    return weight if rng.random() < 0.5 else -weight


def random_function_1d(rng: np.random.Generator, max_cells: int = 20, ambient_coeff: int = 0) -> ConstructibleFunction:
    """Weighted points and open gaps between sorted distinct rationals."""
    count = int(rng.integers(1, (max_cells + 1) // 2 + 1))
    coords = sorted({random_rational(rng, -10, 10) for _ in range(count)})
    cells = []
    for c in coords:
        if rng.random() < 0.7:
            cells.append((((c,),), random_weight(rng)))
    for a, b in zip(coords, coords[1:]):
        if rng.random() < 0.6:
            cells.append((((a,), (b,)), random_weight(rng)))
    if not cells:
        cells.append((((coords[0],),), 1))
    return ConstructibleFunction.from_cells(1, cells[:max_cells], ambient_coeff)


def _random_affine_2d(rng: np.random.Generator):
    while True:
        m = [[random_rational(rng, -2, 2, 3) for _ in range(2)] for _ in range(2)]
        if m[0][0] * m[1][1] - m[0][1] * m[1][0] != 0:
            break
    shift = (random_rational(rng, -5, 5), random_rational(rng, -5, 5))

    def apply(p: tuple[int, int]) -> Point:
        return (
            m[0][0] * p[0] + m[0][1] * p[1] + shift[0],
            m[1][0] * p[0] + m[1][1] * p[1] + shift[1],
        )

    return apply


def random_function_2d(rng: np.random.Generator, size: int = 2, density: float = 0.4,
                       ambient_coeff: int = 0) -> ConstructibleFunction:
    """Random weights on the open cells of a triangulated grid under a random rational affine map."""
    apply = _random_affine_2d(rng)
    triangles = []
    for i in range(size):
        for j in range(size):
            triangles.append(((i, j), (i + 1, j), (i + 1, j + 1)))
            triangles.append(((i, j), (i, j + 1), (i + 1, j + 1)))
    faces = sorted({frozenset(face) for tri in triangles for k in (1, 2, 3)
                    for face in combinations(tri, k)}, key=lambda s: (len(s), sorted(s)))
    cells = [
        (tuple(apply(p) for p in sorted(face)), random_weight(rng))
        for face in faces
        if rng.random() < density
    ]
    if not cells:
        cells.append(((apply((0, 0)),), 1))
    return ConstructibleFunction.from_cells(2, cells, ambient_coeff)


def random_function_3d(rng: np.random.Generator, count: int = 2, ambient_coeff: int = 0) -> ConstructibleFunction:
    """Weighted faces of closed tetrahedra placed far apart along the first axis."""
    cells = []
    for k in range(count):
        origin = (Fraction(10 * k), random_rational(rng, -2, 2), random_rational(rng, -2, 2))
        scales = [Fraction(int(rng.integers(1, 4))) for _ in range(3)]
        corners = [origin] + [
            tuple(origin[i] + (scales[axis] if i == axis else 0) for i in range(3)) for axis in range(3)
        ]
        for size in (1, 2, 3, 4):
            for face in combinations(corners, size):
                if rng.random() < 0.5:
                    cells.append((face, random_weight(rng)))
    if not cells:
        cells.append((((Fraction(0),) * 3,), 1))
    return ConstructibleFunction.from_cells(3, cells, ambient_coeff)


def random_function(rng: np.random.Generator, n: int, ambient_coeff: int = 0) -> ConstructibleFunction:
    if n == 1:
        return random_function_1d(rng, ambient_coeff=ambient_coeff)
    if n == 2:
        return random_function_2d(rng, ambient_coeff=ambient_coeff)
    return random_function_3d(rng, ambient_coeff=ambient_coeff)


def random_low_dim_function(rng: np.random.Generator, n: int, cells: int = 4) -> ConstructibleFunction:
    """Weighted points and open segments (cells may overlap; fine for QECT, which is additive)."""
    pieces = []
    for _ in range(cells):
        a = tuple(random_rational(rng, -3, 3) for _ in range(n))
        if rng.random() < 0.5:
            pieces.append(((a,), random_weight(rng)))
        else:
            b = tuple(random_rational(rng, -3, 3) for _ in range(n))
            if a != b:
                pieces.append(((a, b), random_weight(rng)))
    return ConstructibleFunction.from_cells(n, pieces)


def perturb_one_weight(rng: np.random.Generator, f: ConstructibleFunction) -> ConstructibleFunction:
    """f with one simplex weight changed by a nonzero amount."""
    if not f.complex.simplices:
        point = (tuple(Fraction(0) for _ in range(f.ambient_dim)),)
        return ConstructibleFunction.from_cells(f.ambient_dim, [(point, 1)], f.ambient_coeff)
    index = int(rng.integers(0, len(f.complex.simplices)))
    weights = dict(f.weights)
    weights[index] = weights.get(index, 0) + random_weight(rng)
    return ConstructibleFunction(f.complex, weights, f.ambient_coeff)


def random_direction(rng: np.random.Generator, n: int, bound: int = 6) -> DirectionProbe:
    """Nonzero integer lattice direction."""
    while True:
        nu = tuple(Fraction(int(c)) for c in rng.integers(-bound, bound + 1, size=n))
        if any(nu):
            return DirectionProbe(nu)


def rational_sphere_point(rng: np.random.Generator, n: int, bound: int = 5) -> DirectionProbe:
    """Exact point of S^{n-1} by inverse stereographic projection of a rational point of R^{n-1}."""
    if n == 1:
        return DirectionProbe((Fraction(1 if rng.random() < 0.5 else -1),))
    y = [random_rational(rng, -bound, bound) for _ in range(n - 1)]
    s = sum(c * c for c in y)
    return DirectionProbe(tuple(2 * c / (s + 1) for c in y) + ((s - 1) / (s + 1),))


def random_directions(rng: np.random.Generator, n: int, count: int) -> list[DirectionProbe]:
    return [
        random_direction(rng, n) if i % 2 == 0 else rational_sphere_point(rng, n)
        for i in range(count)
    ]


def random_sym_matrix(rng: np.random.Generator, n: int, bound: int = 3, denominator: int = 4) -> SymMatrix:
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            rows[i][j] = rows[j][i] = random_rational(rng, -bound, bound, denominator)
    return SymMatrix(tuple(tuple(row) for row in rows))


def random_point_in_ball(rng: np.random.Generator, n: int, R: Fraction, denominator: int = 8) -> Point:
    """Rational point with |p|² <= R² by rejection."""
    bound = int(np.ceil(float(R)))
    while True:
        p = tuple(random_rational(rng, -bound, bound, denominator) for _ in range(n))
        if norm_squared(p) <= R * R:
            return p


def random_point(rng: np.random.Generator, n: int, bound: int = 3) -> Point:
    return tuple(random_rational(rng, -bound, bound) for _ in range(n))
