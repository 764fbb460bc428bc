"""
Barycentric subdivision and triangulated spheres.

Vertices are indexed once; simplices and faces are sorted tuples of vertex indices.
"""

import logging
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations
from typing import Iterable, Sequence

import numpy as np

from .rational import Point, barycenter

logger = logging.getLogger(__name__)

Face = tuple[int, ...]


class VertexIndex:
    """Exact points, each stored once under a stable integer index."""

    def __init__(self, points: Iterable[Point] = ()):
        self.points: list[Point] = []
        self._index: dict[Point, int] = {}
        for p in points:
            self.add(p)

    def add(self, p: Point) -> int:
        if p not in self._index:
            self._index[p] = len(self.points)
            self.points.append(p)
        return self._index[p]


def subdivide(simplices: Iterable[Face], vertices: VertexIndex) -> list[Face]:
    """One barycentric subdivision: each k-simplex splits into (k+1)! flags of prefix barycenters."""
    refined = []
    for simplex in simplices:
        for order in permutations(simplex):
            flag = (
                vertices.add(barycenter([vertices.points[i] for i in order[: j + 1]]))
                for j in range(len(order))
            )
            refined.append(tuple(sorted(flag)))
    return refined


def iterated_subdivision(simplices: Iterable[Face], vertices: VertexIndex, level: int) -> list[Face]:
    simplices = list(simplices)
    for _ in range(level):
        simplices = subdivide(simplices, vertices)
    return simplices


def all_faces(simplices: Iterable[Face]) -> set[Face]:
    """Every nonempty face of the given simplices."""
    faces = set()
    for simplex in simplices:
        for k in range(1, len(simplex) + 1):
            faces.update(combinations(simplex, k))
    return faces


def standard_simplex(k: int) -> tuple[Point, ...]:
    """Vertices e_0, ..., e_k of the standard k-simplex in R^{k+1} (barycentric coordinates)."""
    return tuple(tuple(Fraction(int(i == j)) for j in range(k + 1)) for i in range(k + 1))


@lru_cache(maxsize=32)
def interior_faces(k: int, level: int) -> tuple[tuple[Point, ...], ...]:
    """Open cells of the level-fold subdivided k-simplex lying in its relative interior.

    Cells are given in barycentric coordinates; a cell is interior iff every coordinate is
    positive at some vertex.
    """
    vertices = VertexIndex(standard_simplex(k))
    simplices = iterated_subdivision([tuple(range(k + 1))], vertices, level)
    interior = [
        tuple(sorted(vertices.points[i] for i in face))
        for face in all_faces(simplices)
        if all(any(vertices.points[v][i] > 0 for v in face) for i in range(k + 1))
    ]
    interior.sort(key=lambda face: (len(face), face))
    return tuple(interior)


def euler_characteristic(faces: Iterable[tuple]) -> int:
    return sum((-1) ** (len(face) - 1) for face in faces)


class SphereMesh:
    """
    Triangulated (k-1)-sphere as the boundary of the cross-polytope conv(±e_i) in R^k.

    Facets are refined by stellar subdivision, so any set of facets can be barycentrically
    subdivided while their neighbours stay conforming. Coordinates lie on the polytope; callers
    project them onto the round sphere.
    """

    def __init__(self, points: Sequence[Sequence[float]], facets: Iterable[Face]):
        self._points = [np.asarray(p, dtype=float) for p in points]
        self._facets: set[Face] = set()
        self._star: dict[int, set[Face]] = {}
        for facet in facets:
            self._add_facet(facet)

    @classmethod
    def cross_polytope(cls, k: int, level: int = 0) -> "SphereMesh":
        points, facets = _uniform_cross_polytope(k, level)
        return cls(points, facets)

    @property
    def dimension(self) -> int:
        return len(self._points[0])

    @property
    def coords(self) -> np.ndarray:
        return np.array(self._points).reshape(len(self._points), self.dimension)

    @property
    def facets(self) -> list[Face]:
        return sorted(self._facets)

    def faces(self) -> set[Face]:
        return all_faces(self._facets)

    def _add_facet(self, facet: Face) -> None:
        self._facets.add(facet)
        for v in facet:
            self._star.setdefault(v, set()).add(facet)

    def _remove_facet(self, facet: Face) -> None:
        self._facets.discard(facet)
        for v in facet:
            self._star[v].discard(facet)

    def _stellar(self, face: Face) -> None:
        """Replace the star of the face by the cone from its barycenter over the star's boundary."""
        containing = set.intersection(*(self._star.get(v, set()) for v in face))
        if not containing:
            return
        center = len(self._points)
        self._points.append(np.mean([self._points[v] for v in face], axis=0))
        for facet in sorted(containing):
            self._remove_facet(facet)
            for v in face:
                self._add_facet(tuple(sorted(set(facet) - {v} | {center})))

    def refine(self, facets: Iterable[Face]) -> int:
        """Barycentric subdivision of the given facets; returns how many faces were split."""
        faces = {
            face
            for facet in facets
            for size in range(2, len(facet) + 1)
            for face in combinations(facet, size)
        }
        # higher faces first, so every lower face is still present when its turn comes
        for face in sorted(faces, key=lambda face: (-len(face), face)):
            self._stellar(face)
        return len(faces)

    def refine_where_mixed(self, inside: np.ndarray) -> int:
        """Subdivide the facets whose vertices disagree on `inside`."""
        mixed = [facet for facet in self._facets if len({bool(inside[v]) for v in facet}) == 2]
        return self.refine(mixed)


@lru_cache(maxsize=32)
def _uniform_cross_polytope(k: int, level: int) -> tuple[tuple[tuple[float, ...], ...], tuple[Face, ...]]:
    """Points and facets of the level-fold subdivided cross-polytope boundary in R^k."""
    points = []
    for i in range(k):
        for sign in (1.0, -1.0):
            points.append(tuple(sign if j == i else 0.0 for j in range(k)))
    # vertex 2i is +e_i and 2i + 1 is -e_i; a facet picks one of them per axis
    facets = [()]
    for i in range(k):
        facets = [facet + (2 * i + side,) for facet in facets for side in (0, 1)]
    mesh = SphereMesh(points, facets)
    for _ in range(level):
        mesh.refine(mesh.facets)
    logger.debug(f"Sphere mesh k={k} level={level}: {len(mesh._points)} vertices, {len(mesh._facets)} facets")
    return tuple(tuple(p) for p in mesh.coords), tuple(mesh.facets)


def sphere_mesh(k: int, level: int) -> tuple[np.ndarray, tuple[Face, ...]]:
    """(vertex coordinates, every face) of the level-fold subdivided cross-polytope boundary."""
    mesh = SphereMesh.cross_polytope(k, level)
    return mesh.coords, tuple(sorted(mesh.faces()))
