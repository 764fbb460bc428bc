"""
Generalized Radon kernels: fiber Euler characteristics and the composition formula.

For a kernel K_f = 1{f(x, ξ) <= t} with dual K'_f = 1{f(x', ξ) >= t}, the fiber
K_{x,f} ∩ K'_{x',f} retracts onto {ξ ∈ P : f(x', ξ) - f(x, ξ) >= 0}. For the three kernels here
that difference is affine in ξ, so the fiber is a cap, a hemisphere, the whole sphere P or empty.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import BoundViolationError, SupportEscapesBallError, UnsupportedPartitionError
from .euler_core import euler_integral, point_evaluate
from .models import ConstructibleFunction, FiberCharReport, KernelFamily, KernelKind
from .qect import thm47_bound_check
from .rational import Point, norm_squared, to_point
from .spectral import bilinear
from .subdivision import SphereMesh, all_faces, euler_characteristic

logger = logging.getLogger(__name__)


def sphere_chi(dim: int) -> int:
    """χ(S^dim)."""
    return 1 + (-1) ** dim


def chi_parameter_sphere(kind: KernelKind) -> int:
    """χ(P): P is S^{n-1} for the linear and fixed-A kernels and S^{d-1} (d = n(n+1)/2) for v = 0."""
    if kind.family is KernelFamily.QUADRIC_V0:
        return sphere_chi(kind.matrix_space_dim - 1)
    return sphere_chi(kind.n - 1)


def _check_fixed_a(kind: KernelKind, x: Point, x_prime: Point) -> None:
    if not thm47_bound_check(kind.A, kind.R):
        raise BoundViolationError(f"||A||_op < 1/(1 + 2R²) fails for R = {kind.R}")
    for p in (x, x_prime):
        if norm_squared(p) > kind.R * kind.R:
            raise SupportEscapesBallError(f"Point {p} lies outside B_{kind.R}(0)")


def fiber_char_analytic(kind: KernelKind, x, x_prime) -> int:
    """Closed form of χ(K_{x,f} ∩ K'_{x',f}): χ(P) on the (±)diagonal, 1 elsewhere."""
    x, x_prime = to_point(x), to_point(x_prime)
    if kind.family is KernelFamily.QUADRIC_V0:
        on_diagonal = x == x_prime or x == tuple(-c for c in x_prime)
    else:
        if kind.family is KernelFamily.QUADRIC_FIXED_A:
            _check_fixed_a(kind, x, x_prime)
        on_diagonal = x == x_prime
    return chi_parameter_sphere(kind) if on_diagonal else 1


@dataclass(frozen=True)
class DifferenceFunctional:
    """Δ(ξ) = constant + gradient·ξ on the sphere of the given radius in R^k."""
    constant: Fraction
    gradient: tuple[Fraction, ...]
    radius: float

    @property
    def dim(self) -> int:
        return len(self.gradient)

    def __call__(self, xi: np.ndarray) -> np.ndarray:
        gradient = np.array([float(g) for g in self.gradient])
        return float(self.constant) + xi @ gradient

    def negated(self) -> "DifferenceFunctional":
        return DifferenceFunctional(-self.constant, tuple(-g for g in self.gradient), self.radius)


def operator_norm_float(kind: KernelKind) -> float:
    matrix = np.array([[float(c) for c in row] for row in kind.A.entries])
    return float(np.max(np.abs(np.linalg.eigvalsh(matrix))))


def parameter_sphere(kind: KernelKind) -> tuple[int, float]:
    """(k, radius) of the round sphere in R^k meshed for the parameter space P."""
    if kind.family is KernelFamily.QUADRIC_V0:
        return kind.matrix_space_dim, 1.0
    if kind.family is KernelFamily.QUADRIC_FIXED_A:
        return kind.n, 1.0 - operator_norm_float(kind)
    return kind.n, 1.0


def difference_functional(kind: KernelKind, x, x_prime) -> DifferenceFunctional:
    """
    Δ(ξ) = f(x', ξ) - f(x, ξ) as an affine functional on the parameter space.

    ECT: ξ = ν, Δ = ν·(x' - x). v = 0 quadrics: ξ = A in upper-triangular coordinates,
    Δ = x'ᵀAx' - xᵀAx. Fixed-A quadrics: ξ = v, Δ = x'ᵀAx' - xᵀAx + v·(x' - x).
    """
    x, x_prime = to_point(x), to_point(x_prime)
    _, radius = parameter_sphere(kind)
    if kind.family is KernelFamily.QUADRIC_V0:
        n = kind.n
        gradient = []
        for i in range(n):
            for j in range(i, n):
                coefficient = x_prime[i] * x_prime[j] - x[i] * x[j]
                gradient.append(coefficient if i == j else 2 * coefficient)
        return DifferenceFunctional(Fraction(0), tuple(gradient), radius)

    gradient = tuple(b - a for a, b in zip(x, x_prime))
    constant = Fraction(0)
    if kind.family is KernelFamily.QUADRIC_FIXED_A:
        constant = bilinear(kind.A, x_prime, x_prime) - bilinear(kind.A, x, x)
    return DifferenceFunctional(constant, gradient, radius)


@dataclass(frozen=True)
class MeshEstimate:
    chi: int
    stable: bool
    level: int


def _inside(mesh: SphereMesh, delta: Callable[[np.ndarray], np.ndarray], radius: float) -> np.ndarray:
    coords = mesh.coords
    on_sphere = radius * coords / np.linalg.norm(coords, axis=1, keepdims=True)
    return np.asarray(delta(on_sphere)) >= 0


def _region_chi(mesh: SphereMesh, inside: np.ndarray) -> int:
    """χ of the full subcomplex spanned by the inside vertices."""
    faces = set()
    for facet in mesh.facets:
        faces |= all_faces([tuple(v for v in facet if inside[v])])
    return euler_characteristic(faces)


def fiber_char_mesh(
    delta: Callable[[np.ndarray], np.ndarray],
    k: int,
    radius: float = 1.0,
    refinement: int = 4,
    min_level: int = 1,
) -> MeshEstimate:
    """
    χ of the closed region {Δ >= 0} on the sphere of the given radius in R^k.

    The sphere is the cross-polytope pushed radially outward, subdivided uniformly to min_level;
    the region is the full subcomplex on vertices with Δ >= 0. Each further level subdivides only
    the facets where Δ changes sign, and the first level agreeing with the previous one is
    reported as stable.

    Args:
        delta: vectorised Δ taking an (m, k) array of sphere points
        k: ambient dimension of the sphere
        radius: sphere radius
        refinement: highest subdivision level tried
        min_level: uniform starting level

    Returns:
        MeshEstimate(chi, stable, level)
    """
    if radius <= 0:
        logger.warning(f"Parameter sphere has nonpositive radius {radius}")
        return MeshEstimate(0, False, min_level)
    if k == 1:
        # S^0 has nothing to refine
        mesh = SphereMesh.cross_polytope(1)
        return MeshEstimate(_region_chi(mesh, _inside(mesh, delta, radius)), True, 0)

    mesh = SphereMesh.cross_polytope(k, min_level)
    inside = _inside(mesh, delta, radius)
    previous = _region_chi(mesh, inside)
    for level in range(min_level + 1, refinement + 1):
        split = mesh.refine_where_mixed(inside)
        inside = _inside(mesh, delta, radius)
        current = _region_chi(mesh, inside)
        logger.debug(f"Sphere mesh level {level}: {split} faces split, χ = {current}")
        if current == previous:
            return MeshEstimate(current, True, level)
        previous = current
    logger.warning(f"Sphere mesh χ not stable up to level {refinement} (k={k})")
    return MeshEstimate(previous, False, refinement)


def fiber_char_report(kind: KernelKind, x, x_prime, refinement: Optional[int] = None) -> FiberCharReport:
    """Analytic fiber χ, checked against the sphere-mesh oracle when a refinement cap is given."""
    x, x_prime = to_point(x), to_point(x_prime)
    analytic = fiber_char_analytic(kind, x, x_prime)
    if refinement is None:
        return FiberCharReport(kind, x, x_prime, analytic)
    delta = difference_functional(kind, x, x_prime)
    estimate = fiber_char_mesh(delta, delta.dim, delta.radius, refinement)
    report = FiberCharReport(kind, x, x_prime, analytic, estimate.chi, estimate.stable, estimate.level)
    if not report.agrees:
        logger.warning(
            f"Fiber χ mismatch for {kind.family.value}: analytic {analytic}, mesh {estimate.chi}"
        )
    return report


@dataclass(frozen=True)
class PartitionPiece:
    """A piece S_i of X × X with its fiber constant; None means χ(P)."""
    spec: str
    constant: Optional[int] = None


_POINT_SPECS = ("diagonal", "pm_diagonal")


def kernel_partition(kind: KernelKind) -> tuple[tuple[PartitionPiece, ...], int]:
    """The partition {S_i} with constants, and χ(P), for each kernel."""
    first = "pm_diagonal" if kind.family is KernelFamily.QUADRIC_V0 else "diagonal"
    return (PartitionPiece(first), PartitionPiece("complement", 1)), chi_parameter_sphere(kind)


def _diagonal_points(spec: str, x_prime: Point) -> set[Point]:
    if spec == "diagonal":
        return {x_prime}
    return {x_prime, tuple(-c for c in x_prime)}


def compose_lemma42(
    h: ConstructibleFunction, partition: Sequence[PartitionPiece], chi_p: int
) -> Callable[..., int]:
    """
    Evaluator x' ↦ Σ_i c_i ∫ h(x)·1_{S_i}(x, x') dχ(x). On R, x' may be a bare scalar.

    A diagonal-type slice is a finite point set whose integral is a sum of point values; the
    complement slice integrates h over everything not yet covered.

    Raises:
        UnsupportedPartitionError: specs other than diagonal, pm_diagonal, complement, or a
            complement that is not last
    """
    for position, piece in enumerate(partition):
        if piece.spec not in _POINT_SPECS + ("complement",):
            raise UnsupportedPartitionError(f"Unsupported partition piece: {piece.spec!r}")
        if piece.spec == "complement" and position != len(partition) - 1:
            raise UnsupportedPartitionError("The complement piece must come last")
    total = euler_integral(h)

    def evaluate(x_prime) -> int:
        if h.ambient_dim == 1 and not isinstance(x_prime, (tuple, list, np.ndarray)):
            x_prime = (x_prime,)
        x_prime = to_point(x_prime)
        covered: set[Point] = set()
        value = 0
        for piece in partition:
            constant = chi_p if piece.constant is None else piece.constant
            if piece.spec == "complement":
                value += constant * (total - sum(point_evaluate(h, z) for z in covered))
            else:
                points = _diagonal_points(piece.spec, x_prime) - covered
                value += constant * sum(point_evaluate(h, z) for z in points)
                covered |= points
        return value

    return evaluate
