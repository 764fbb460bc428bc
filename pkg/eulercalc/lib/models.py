"""
Data models for the exact Euler-calculus engine.

These are immutable value types. Operations live in the sibling modules
(euler_core, ect, qect, radon); the models only hold data and check the
structural invariants that do not need geometry.
"""

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Iterator, Optional

from .errors import DimensionMismatchError, EulerCalcError
from .rational import Point, to_point, to_rational


@dataclass(frozen=True)
class GeometricComplex:
    """Rational vertices plus relatively-open simplices given by vertex-index sets.

    A simplex with k+1 indices is an open k-cell. Distinct simplices are expected to have
    pairwise-disjoint relative interiors; `euler_core.validate_complex` checks this.
    """
    ambient_dim: int
    vertices: tuple[Point, ...]
    simplices: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.ambient_dim < 1:
            raise EulerCalcError(f"ambient_dim must be positive, got {self.ambient_dim}")
        for vertex in self.vertices:
            if len(vertex) != self.ambient_dim:
                raise DimensionMismatchError(
                    f"Vertex {vertex} has {len(vertex)} coordinates, expected {self.ambient_dim}"
                )
        for simplex in self.simplices:
            for index in simplex:
                if not 0 <= index < len(self.vertices):
                    raise EulerCalcError(f"Simplex {simplex} references missing vertex {index}")

    @classmethod
    def from_points(cls, ambient_dim: int, vertices, simplices) -> "GeometricComplex":
        return cls(
            ambient_dim=ambient_dim,
            vertices=tuple(to_point(v) for v in vertices),
            simplices=tuple(tuple(int(i) for i in s) for s in simplices),
        )

    def simplex_points(self, index: int) -> tuple[Point, ...]:
        return tuple(self.vertices[i] for i in self.simplices[index])

    def dimension_of(self, index: int) -> int:
        return len(self.simplices[index]) - 1


@dataclass(frozen=True)
class ConstructibleFunction:
    """f(x) = c·1_{R^n}(x) + Σ_σ a_σ·1_{relint σ}(x)."""
    complex: GeometricComplex
    weights: dict[int, int] = field(default_factory=dict)
    ambient_coeff: int = 0

    @property
    def ambient_dim(self) -> int:
        return self.complex.ambient_dim

    def cells(self) -> Iterator[tuple[tuple[Point, ...], int]]:
        """Yield (vertex points, weight) for every simplex with a nonzero weight, in index order."""
        for index in sorted(self.weights):
            weight = self.weights[index]
            if weight:
                yield self.complex.simplex_points(index), weight

    @cached_property
    def max_cell_dimension(self) -> int:
        dims = [len(points) - 1 for points, _ in self.cells()]
        return max(dims) if dims else -1

    @classmethod
    def zero(cls, ambient_dim: int) -> "ConstructibleFunction":
        return cls(GeometricComplex(ambient_dim, (), ()), {}, 0)

    @classmethod
    def constant(cls, ambient_dim: int, c: int) -> "ConstructibleFunction":
        """c·1_{R^n}."""
        return cls(GeometricComplex(ambient_dim, (), ()), {}, c)

    @classmethod
    def from_cells(cls, ambient_dim: int, cells, ambient_coeff: int = 0) -> "ConstructibleFunction":
        """Build from an iterable of (vertex points, weight); vertices are shared by coordinates."""
        vertex_index: dict[Point, int] = {}
        simplices = []
        weights = {}
        for points, weight in cells:
            indices = []
            for p in points:
                p = to_point(p)
                if p not in vertex_index:
                    vertex_index[p] = len(vertex_index)
                indices.append(vertex_index[p])
            weights[len(simplices)] = int(weight)
            simplices.append(tuple(indices))
        vertices = tuple(sorted(vertex_index, key=vertex_index.get))
        return cls(GeometricComplex(ambient_dim, vertices, tuple(simplices)), weights, int(ambient_coeff))


@dataclass(frozen=True)
class Line2D:
    """The line s ↦ point + s·direction in R^2."""
    point: Point
    direction: Point

    def __post_init__(self):
        if len(self.point) != 2 or len(self.direction) != 2:
            raise DimensionMismatchError("Line2D needs 2-dimensional point and direction")
        if all(c == 0 for c in self.direction):
            raise EulerCalcError("Line2D direction must be nonzero")

    @classmethod
    def vertical(cls, a) -> "Line2D":
        return cls((to_rational(a), Fraction(0)), (Fraction(0), Fraction(1)))


@dataclass(frozen=True)
class DirectionProbe:
    """A nonzero rational direction; positive multiples describe the same probe."""
    nu: Point

    def __post_init__(self):
        if all(c == 0 for c in self.nu):
            raise EulerCalcError("Direction must be nonzero")

    @classmethod
    def of(cls, values) -> "DirectionProbe":
        return cls(to_point(values))

    @property
    def dim(self) -> int:
        return len(self.nu)

    def negated(self) -> "DirectionProbe":
        return DirectionProbe(tuple(-c for c in self.nu))

    def display(self) -> tuple[float, ...]:
        """Float-normalised direction, for display only."""
        length = sum(float(c) ** 2 for c in self.nu) ** 0.5
        return tuple(float(c) / length for c in self.nu)


@dataclass(frozen=True)
class EctTable:
    """ECT(f) sampled on finitely many directions: one StepFunction per direction."""
    directions: tuple[DirectionProbe, ...]
    curves: tuple  # tuple[StepFunction, ...]

    def __post_init__(self):
        if len(self.directions) != len(self.curves):
            raise EulerCalcError(
                f"EctTable has {len(self.directions)} directions but {len(self.curves)} curves"
            )

    def __len__(self) -> int:
        return len(self.directions)


@dataclass(frozen=True)
class SymMatrix:
    """A symmetric rational n×n matrix."""
    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        n = len(self.entries)
        for i, row in enumerate(self.entries):
            if len(row) != n:
                raise DimensionMismatchError(f"Matrix row {i} has {len(row)} entries, expected {n}")
            for j in range(i):
                if row[j] != self.entries[j][i]:
                    raise EulerCalcError(f"Matrix is not symmetric at ({i}, {j})")

    @classmethod
    def of(cls, rows) -> "SymMatrix":
        return cls(tuple(to_point(row) for row in rows))

    @classmethod
    def zeros(cls, n: int) -> "SymMatrix":
        return cls(tuple(tuple(Fraction(0) for _ in range(n)) for _ in range(n)))

    @classmethod
    def diag(cls, values) -> "SymMatrix":
        values = to_point(values)
        n = len(values)
        return cls(tuple(
            tuple(values[i] if i == j else Fraction(0) for j in range(n)) for i in range(n)
        ))

    @property
    def n(self) -> int:
        return len(self.entries)

    def is_zero(self) -> bool:
        return all(c == 0 for row in self.entries for c in row)

    def scaled(self, c: Fraction) -> "SymMatrix":
        return SymMatrix(tuple(tuple(c * x for x in row) for row in self.entries))


@dataclass(frozen=True)
class QuadricProbe:
    """The sublevel probe x^T A x + v·x <= t; positive joint multiples are the same probe."""
    A: SymMatrix
    v: Point
    t: Fraction

    def __post_init__(self):
        if len(self.v) != self.A.n:
            raise DimensionMismatchError(f"v has {len(self.v)} entries but A is {self.A.n}×{self.A.n}")
        if self.A.is_zero() and all(c == 0 for c in self.v):
            raise EulerCalcError("Quadric probe needs (A, v) != (0, 0)")

    def scaled(self, c: Fraction) -> "QuadricProbe":
        return QuadricProbe(self.A.scaled(c), tuple(c * x for x in self.v), c * self.t)

    def normalized(self) -> "QuadricProbe":
        """Representative whose largest |a_ij| or |v_i| is 1."""
        largest = max(abs(c) for c in (*(x for row in self.A.entries for x in row), *self.v))
        return self.scaled(1 / largest)

    def same_probe(self, other: "QuadricProbe") -> bool:
        return self.normalized() == other.normalized()


class OpNormOrder(Enum):
    LESS = "less"
    EQUAL = "equal"
    GREATER = "greater"


class KernelFamily(Enum):
    ECT_LINEAR = "ect_linear"
    QUADRIC_V0 = "quadric_v0"
    QUADRIC_FIXED_A = "quadric_fixedA"


@dataclass(frozen=True)
class KernelKind:
    """One of the three kernels: half-spaces, v = 0 quadrics, or fixed-A quadrics on B_R(0)."""
    family: KernelFamily
    n: int
    A: Optional[SymMatrix] = None
    R: Optional[Fraction] = None

    def __post_init__(self):
        if self.n < 1:
            raise EulerCalcError(f"Kernel dimension must be positive, got {self.n}")
        if self.family is KernelFamily.QUADRIC_FIXED_A:
            if self.A is None or self.R is None:
                raise EulerCalcError("quadric_fixedA kernel needs A and R")
            if self.A.n != self.n:
                raise DimensionMismatchError(f"A is {self.A.n}×{self.A.n} but n = {self.n}")
            if self.R < 0:
                raise EulerCalcError(f"R must be nonnegative, got {self.R}")

    @classmethod
    def ect_linear(cls, n: int) -> "KernelKind":
        return cls(KernelFamily.ECT_LINEAR, n)

    @classmethod
    def quadric_v0(cls, n: int) -> "KernelKind":
        return cls(KernelFamily.QUADRIC_V0, n)

    @classmethod
    def quadric_fixed_a(cls, A: SymMatrix, R) -> "KernelKind":
        return cls(KernelFamily.QUADRIC_FIXED_A, A.n, A, to_rational(R))

    @property
    def matrix_space_dim(self) -> int:
        return self.n * (self.n + 1) // 2


@dataclass(frozen=True)
class FiberCharReport:
    """χ(K_{x,f} ∩ K'_{x',f}) from the closed form and, optionally, the sphere-mesh oracle."""
    kind: KernelKind
    x: Point
    x_prime: Point
    analytic_chi: int
    oracle_chi: Optional[int] = None
    oracle_stable: bool = False
    oracle_level: Optional[int] = None

    @property
    def agrees(self) -> bool:
        return not self.oracle_stable or self.oracle_chi == self.analytic_chi


class Definiteness(Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    ZERO = "zero"
    OTHER = "indefinite_or_singular"
