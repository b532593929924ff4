from functools import lru_cache
from typing import Tuple

import numpy as np

from ..mesh.triangulation import Triangulation
from .assembly import interior_totals
from .solver_types import BoundaryData, Target

DEFAULT_NODES = 32


@lru_cache(maxsize=8)
def _unit_gauss_legendre(nodes: int) -> Tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(nodes)
    return 0.5 * (x + 1.0), 0.5 * w


def potential_energy(
    s: np.ndarray,
    reference_s: np.ndarray,
    mesh: Triangulation,
    boundary_data: BoundaryData,
    target: Target,
    nodes: int = DEFAULT_NODES,
) -> float:
    """
    Theta(s) - Theta(reference_s): the integral of sum_i (T_i - T_hat_i) ds_i
    along the straight segment between the two points, by Gauss-Legendre
    quadrature. The 1-form is closed, so the segment is as good as any path.
    """
    s = np.asarray(s, dtype=float)
    reference_s = np.asarray(reference_s, dtype=float)
    direction = s - reference_s
    if not np.any(direction):
        return 0.0
    points, weights = _unit_gauss_legendre(nodes)
    total = 0.0
    for t, w in zip(points, weights):
        T = interior_totals(reference_s + t * direction, mesh, boundary_data)
        total += w * float((T - target.T_hat) @ direction)
    return total
