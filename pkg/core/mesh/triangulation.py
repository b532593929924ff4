from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ..errors import (
    BoundaryMismatchError,
    DegenerateFaceError,
    FaceAllBoundaryError,
    IsolatedInteriorVertexError,
    NoBoundaryError,
    NonManifoldEdgeError,
    NotInteriorVertexError,
    UnknownVertexError,
)

Edge = Tuple[int, int]


def edge_key(i: int, j: int) -> Edge:
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True)
class Face:
    vertices: Tuple[int, int, int]

    def edges(self) -> Tuple[Edge, Edge, Edge]:
        a, b, c = self.vertices
        return (edge_key(a, b), edge_key(b, c), edge_key(a, c))

    def __contains__(self, vertex: int) -> bool:
        return vertex in self.vertices


@dataclass(frozen=True)
class Triangulation:
    """
    A validated triangulated surface with boundary.

    Vertex ids are dense (0..n-1). Boundary flags are derived from edge
    multiplicity. Faces keep their input order, but incidence queries only
    treat them as vertex sets.
    """
    faces: Tuple[Face, ...]
    is_boundary: Tuple[bool, ...]
    interior_vertices: Tuple[int, ...]
    boundary_vertices: Tuple[int, ...]
    interior_index: Dict[int, int]
    boundary_index: Dict[int, int]
    edge_faces: Dict[Edge, Tuple[int, ...]] = field(repr=False)
    _stars: Tuple[Tuple[int, ...], ...] = field(repr=False)
    _star_masks: Tuple[int, ...] = field(repr=False)

    @property
    def n_vertices(self) -> int:
        return len(self.is_boundary)

    @property
    def n_faces(self) -> int:
        return len(self.faces)

    @property
    def n_interior(self) -> int:
        return len(self.interior_vertices)

    @cached_property
    def face_array(self) -> np.ndarray:
        faces = np.array([f.vertices for f in self.faces], dtype=np.int64).reshape(-1, 3)
        faces.setflags(write=False)
        return faces

    @cached_property
    def interior_slots(self) -> np.ndarray:
        """face_array with each vertex replaced by its interior index, or -1 on the boundary."""
        lookup = np.full(self.n_vertices, -1, dtype=np.int64)
        for v, i in self.interior_index.items():
            lookup[v] = i
        slots = lookup[self.face_array]
        slots.setflags(write=False)
        return slots

    def _check_vertex(self, i: int) -> None:
        if not isinstance(i, (int, np.integer)) or not 0 <= i < self.n_vertices:
            raise UnknownVertexError(f"Vertex {i} is not part of this triangulation.")

    def star(self, i: int) -> Tuple[int, ...]:
        """Indices of the faces containing vertex i, in face order."""
        self._check_vertex(i)
        return self._stars[i]

    def edge_star(self, i: int, j: int) -> Tuple[int, ...]:
        """Indices of the faces containing both i and j (0, 1 or 2 of them)."""
        self._check_vertex(i)
        self._check_vertex(j)
        if i == j:
            raise ValueError("edge_star needs two distinct vertices.")
        return self.edge_faces.get(edge_key(int(i), int(j)), ())

    def neighbors(self, i: int) -> Tuple[int, ...]:
        self._check_vertex(i)
        adjacent = set()
        for f in self._stars[i]:
            adjacent.update(self.faces[f].vertices)
        adjacent.discard(i)
        return tuple(sorted(adjacent))

    def coverage(self, interior_subset: Iterable[int]) -> int:
        """|F_I|: the number of faces incident to at least one vertex of I."""
        mask = 0
        for v in interior_subset:
            self._check_vertex(v)
            if self.is_boundary[v]:
                raise NotInteriorVertexError(f"Vertex {v} is a boundary vertex.")
            mask |= self._star_masks[v]
        return bin(mask).count("1")

    def star_mask(self, i: int) -> int:
        """Bitmask over face indices of star(i)."""
        self._check_vertex(i)
        return self._star_masks[i]

    def interior_edges(self) -> List[Edge]:
        """Edges joining two interior vertices, sorted."""
        return sorted(e for e in self.edge_faces
                      if not self.is_boundary[e[0]] and not self.is_boundary[e[1]])

    def to_json(self) -> dict:
        return {
            "vertices": [{"id": v} for v in range(self.n_vertices)],
            "faces": [list(f.vertices) for f in self.faces],
            "boundary": list(self.boundary_vertices),
        }


def build_triangulation(
    raw_vertices: Sequence[int],
    raw_faces: Sequence[Sequence[int]],
    boundary: Optional[Iterable[int]] = None,
) -> Triangulation:
    """
    Validates raw mesh data and returns an immutable Triangulation.

    `raw_vertices` must be a permutation of 0..n-1. When `boundary` is given it
    is cross-checked against the boundary derived from edge multiplicity.
    """
    vertex_ids = [int(v) for v in raw_vertices]
    n = len(vertex_ids)
    if sorted(vertex_ids) != list(range(n)):
        raise UnknownVertexError(f"Vertex ids must be exactly 0..{n - 1} without repeats.")

    faces: List[Face] = []
    for index, raw in enumerate(raw_faces):
        triple = tuple(int(v) for v in raw)
        if len(triple) != 3:
            raise DegenerateFaceError(f"Face {index} has {len(triple)} vertices, expected 3.")
        for v in triple:
            if not 0 <= v < n:
                raise UnknownVertexError(f"Face {index} references undeclared vertex {v}.")
        if len(set(triple)) != 3:
            raise DegenerateFaceError(f"Face {index} repeats a vertex: {list(triple)}.")
        faces.append(Face(triple))  # type: ignore[arg-type]

    edge_faces: Dict[Edge, List[int]] = defaultdict(list)
    for index, face in enumerate(faces):
        for edge in face.edges():
            edge_faces[edge].append(index)

    is_boundary = [False] * n
    for edge, incident in edge_faces.items():
        if len(incident) > 2:
            raise NonManifoldEdgeError(f"Edge {edge} belongs to {len(incident)} faces.")
        if len(incident) == 1:
            is_boundary[edge[0]] = True
            is_boundary[edge[1]] = True

    boundary_vertices = tuple(v for v in range(n) if is_boundary[v])
    if len(boundary_vertices) < 2:
        raise NoBoundaryError("The surface has no boundary edge; at least two boundary vertices are required.")

    stars: List[List[int]] = [[] for _ in range(n)]
    for index, face in enumerate(faces):
        for v in face.vertices:
            stars[v].append(index)

    for index, face in enumerate(faces):
        if all(is_boundary[v] for v in face.vertices):
            raise FaceAllBoundaryError(f"Face {index} {list(face.vertices)} has three boundary vertices.")

    interior_vertices = tuple(v for v in range(n) if not is_boundary[v])
    for v in interior_vertices:
        if not stars[v]:
            raise IsolatedInteriorVertexError(f"Interior vertex {v} belongs to no face.")

    if boundary is not None:
        declared: FrozenSet[int] = frozenset(int(v) for v in boundary)
        derived = frozenset(boundary_vertices)
        if declared != derived:
            extra = sorted(declared - derived)
            missing = sorted(derived - declared)
            raise BoundaryMismatchError(
                f"Declared boundary does not match edge multiplicity (not boundary: {extra}, undeclared: {missing})."
            )

    masks = []
    for v in range(n):
        mask = 0
        for f in stars[v]:
            mask |= 1 << f
        masks.append(mask)

    return Triangulation(
        faces=tuple(faces),
        is_boundary=tuple(is_boundary),
        interior_vertices=interior_vertices,
        boundary_vertices=boundary_vertices,
        interior_index={v: i for i, v in enumerate(interior_vertices)},
        boundary_index={v: i for i, v in enumerate(boundary_vertices)},
        edge_faces={e: tuple(fs) for e, fs in sorted(edge_faces.items())},
        _stars=tuple(tuple(s) for s in stars),
        _star_masks=tuple(masks),
    )


def triangulation_from_json(data: dict) -> Triangulation:
    vertices = [entry["id"] for entry in data["vertices"]]
    return build_triangulation(vertices, data["faces"], data.get("boundary"))


def relabel(mesh: Triangulation, permutation: Sequence[int]) -> Triangulation:
    """Rebuilds the mesh with vertex v renamed to permutation[v]."""
    perm = [int(p) for p in permutation]
    faces = [[perm[v] for v in f.vertices] for f in mesh.faces]
    return build_triangulation(range(mesh.n_vertices), faces)
