"""
Test meshes: triangulated annuli and wheels, plus seeded random problem data.
"""
from typing import List, Optional, Tuple

import numpy as np

from .triangulation import Triangulation, build_triangulation


def annulus_faces(ring_size: int, interior_rings: int) -> List[List[int]]:
    """
    Faces of an annulus made of `interior_rings + 2` concentric rings of
    `ring_size` vertices. Ring 0 and the last ring are the two boundary loops.
    Vertex (ring r, slot j) has id r * ring_size + j.
    """
    if ring_size < 3:
        raise ValueError("ring_size must be at least 3")
    if interior_rings < 1:
        raise ValueError("an annulus fixture needs at least one interior ring")

    faces = []
    for r in range(interior_rings + 1):
        for j in range(ring_size):
            j1 = (j + 1) % ring_size
            a, b = r * ring_size + j, r * ring_size + j1
            c, d = (r + 1) * ring_size + j, (r + 1) * ring_size + j1
            faces.append([a, b, c])
            faces.append([b, d, c])
    return faces


def annulus(ring_size: int = 6, interior_rings: int = 1) -> Triangulation:
    n = ring_size * (interior_rings + 2)
    return build_triangulation(range(n), annulus_faces(ring_size, interior_rings))


def wheel(degree: int = 5) -> Triangulation:
    """A disk with one interior hub (vertex 0) surrounded by `degree` boundary vertices."""
    if degree < 3:
        raise ValueError("a wheel needs at least 3 spokes")
    faces = [[0, 1 + j, 1 + (j + 1) % degree] for j in range(degree)]
    return build_triangulation(range(degree + 1), faces)


def random_boundary_curvatures(
    mesh: Triangulation,
    rng: np.random.Generator,
    low: float = 0.2,
    high: float = 5.0,
) -> np.ndarray:
    """Log-uniform boundary curvatures, indexed by boundary_index."""
    return np.exp(rng.uniform(np.log(low), np.log(high), size=len(mesh.boundary_vertices)))


def random_log_curvatures(
    mesh: Triangulation,
    rng: np.random.Generator,
    spread: float = 1.5,
) -> np.ndarray:
    return rng.uniform(-spread, spread, size=mesh.n_interior)


def random_annulus(
    rng: np.random.Generator,
    ring_sizes: Tuple[int, int] = (4, 8),
    ring_counts: Tuple[int, int] = (1, 3),
) -> Triangulation:
    ring_size = int(rng.integers(ring_sizes[0], ring_sizes[1] + 1))
    rings = int(rng.integers(ring_counts[0], ring_counts[1] + 1))
    return annulus(ring_size, rings)


def problem_json(
    mesh: Triangulation,
    k_hat: np.ndarray,
    t_hat: np.ndarray,
    chains: Optional[list] = None,
) -> dict:
    data = {
        "mesh": mesh.to_json(),
        "boundary_k": {str(v): float(k_hat[i]) for i, v in enumerate(mesh.boundary_vertices)},
        "target_T": {str(v): float(t_hat[i]) for i, v in enumerate(mesh.interior_vertices)},
    }
    if chains is not None:
        data["chains"] = chains
    return data
