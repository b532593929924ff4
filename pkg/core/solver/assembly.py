from typing import Optional

import numpy as np
from scipy import sparse

from ..errors import JacobianInconsistencyError
from ..geometry.circles import face_arrays
from ..mesh.triangulation import Triangulation
from .solver_types import BoundaryData, SolverState, Target

SYMMETRY_RTOL = 1e-10


def full_curvatures(s: np.ndarray, mesh: Triangulation, boundary_data: BoundaryData) -> np.ndarray:
    """Curvatures on all of V: boundary from k_hat, interior exp(s)."""
    k = np.empty(mesh.n_vertices)
    k[list(mesh.boundary_vertices)] = boundary_data.k_hat
    if mesh.n_interior:
        k[list(mesh.interior_vertices)] = np.exp(s)
    return k


def check_jacobian(M: sparse.csr_matrix, strict: bool = True) -> float:
    """Asserts symmetry of M (unless `strict` is off) and returns the smallest row dominance margin."""
    if M.shape[0] == 0:
        return float("inf")
    scale = max(float(abs(M).max()), 1e-300)
    asymmetry = abs(M - M.T)
    if strict and asymmetry.nnz and float(asymmetry.max()) > SYMMETRY_RTOL * scale:
        raise JacobianInconsistencyError(
            f"Jacobian asymmetry {float(asymmetry.max()):.3e} exceeds {SYMMETRY_RTOL:.0e} relative; "
            "the per-face derivatives are inconsistent."
        )
    diag = M.diagonal()
    off = np.asarray(abs(M).sum(axis=1)).ravel() - np.abs(diag)
    return float(np.min(diag - off))


def assemble(
    s: np.ndarray,
    mesh: Triangulation,
    boundary_data: BoundaryData,
    target: Optional[Target] = None,
    check: bool = True,
) -> SolverState:
    """
    Interior totals T_i = sum over star(i) of T_i^f and the Jacobian
    M_ij = dT_i/ds_j. Boundary vertices feed T but get no row or column.
    With `check` off an asymmetric M is returned instead of raising.
    """
    s = np.asarray(s, dtype=float)
    k = full_curvatures(s, mesh, boundary_data)
    geometry = face_arrays(k[mesh.face_array])
    interior_slot = mesh.interior_slots

    n = mesh.n_interior
    mask = interior_slot >= 0
    T = np.zeros(n)
    np.add.at(T, interior_slot[mask], geometry.T[mask])

    # M[slot v, slot u] += dT_v/ds_u for every face and interior pair (v, u)
    pair = mask[:, :, None] & mask[:, None, :]
    rows = np.broadcast_to(interior_slot[:, :, None], pair.shape)[pair]
    cols = np.broadcast_to(interior_slot[:, None, :], pair.shape)[pair]
    M = sparse.coo_matrix((geometry.dT_ds[pair], (rows, cols)), shape=(n, n)).tocsr()
    M.sum_duplicates()

    margin = check_jacobian(M, strict=check)
    residual = T - target.T_hat if target is not None else np.zeros(n)
    return SolverState(
        s=s.copy(),
        T=T,
        residual=residual,
        M=M,
        faces=geometry,
        k=k,
        dominance_margin=margin,
    )


def interior_totals(s: np.ndarray, mesh: Triangulation, boundary_data: BoundaryData) -> np.ndarray:
    """The forward map s -> T(s), without the Jacobian."""
    k = full_curvatures(np.asarray(s, dtype=float), mesh, boundary_data)
    geometry = face_arrays(k[mesh.face_array])
    interior_slot = mesh.interior_slots
    mask = interior_slot >= 0
    T = np.zeros(mesh.n_interior)
    np.add.at(T, interior_slot[mask], geometry.T[mask])
    return T
