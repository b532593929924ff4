import numpy as np
import pytest
from scipy import sparse

from core.errors import JacobianInconsistencyError
from core.mesh.fixtures import random_annulus, random_boundary_curvatures, random_log_curvatures, wheel
from core.solver.assembly import assemble, check_jacobian, full_curvatures, interior_totals
from core.solver.solver_types import BoundaryData, Target


def test_full_curvatures_places_boundary_and_interior(ring_mesh):
    k_hat = np.linspace(0.5, 2.0, 10)
    s = np.log(np.array([1.0, 2.0, 3.0, 4.0, 5.0]))
    k = full_curvatures(s, ring_mesh, BoundaryData(k_hat))
    np.testing.assert_allclose(k[list(ring_mesh.boundary_vertices)], k_hat)
    np.testing.assert_allclose(k[list(ring_mesh.interior_vertices)], [1, 2, 3, 4, 5])


def test_jacobian_structure_on_random_annuli(rng):
    for _ in range(100):
        mesh = random_annulus(rng, ring_sizes=(4, 10), ring_counts=(1, 5))
        boundary_data = BoundaryData(random_boundary_curvatures(mesh, rng))
        s = random_log_curvatures(mesh, rng, spread=2.0)
        state = assemble(s, mesh, boundary_data)
        M = state.M.toarray()

        assert 4 <= mesh.n_interior <= 50
        np.testing.assert_allclose(M, M.T, rtol=1e-10, atol=1e-14)
        assert np.all(np.diag(M) > 0)
        for a, b in mesh.interior_edges():
            i, j = mesh.interior_index[a], mesh.interior_index[b]
            assert M[i, j] < 0
        assert state.dominance_margin > 0
        off = np.abs(M).sum(axis=1) - np.abs(np.diag(M))
        assert np.all(np.diag(M) - off > 0)


def test_jacobian_matches_finite_differences(rng, ring_mesh):
    boundary_data = BoundaryData(random_boundary_curvatures(ring_mesh, rng))
    s = random_log_curvatures(ring_mesh, rng)
    M = assemble(s, ring_mesh, boundary_data).M.toarray()
    h = 1e-6
    for j in range(ring_mesh.n_interior):
        e = np.zeros_like(s)
        e[j] = h
        fd = (interior_totals(s + e, ring_mesh, boundary_data) - interior_totals(s - e, ring_mesh, boundary_data)) / (2 * h)
        np.testing.assert_allclose(M[:, j], fd, rtol=1e-6, atol=1e-9)


def test_totals_and_residual(rng, ring_mesh):
    boundary_data = BoundaryData(random_boundary_curvatures(ring_mesh, rng))
    s = random_log_curvatures(ring_mesh, rng)
    target = Target(np.full(ring_mesh.n_interior, 4.0))
    state = assemble(s, ring_mesh, boundary_data, target)
    np.testing.assert_allclose(state.T, interior_totals(s, ring_mesh, boundary_data), rtol=1e-14)
    np.testing.assert_allclose(state.residual, state.T - 4.0)
    assert state.residual_inf == pytest.approx(np.max(np.abs(state.T - 4.0)))

    # T_v sums the per-face totals over the star of v
    v = ring_mesh.interior_vertices[0]
    by_face = sum(
        state.faces.T[f, ring_mesh.faces[f].vertices.index(v)] for f in ring_mesh.star(v)
    )
    assert state.T[0] == pytest.approx(by_face, rel=1e-14)


def test_boundary_vertices_get_no_rows():
    mesh = wheel(5)
    state = assemble(np.zeros(1), mesh, BoundaryData(np.ones(5)))
    assert state.M.shape == (1, 1)
    assert state.T.shape == (1,)


def test_asymmetric_matrix_is_rejected():
    M = sparse.csr_matrix(np.array([[2.0, -1.0], [-0.5, 2.0]]))
    with pytest.raises(JacobianInconsistencyError):
        check_jacobian(M)
    margin = check_jacobian(sparse.csr_matrix(np.array([[2.0, -1.0], [-1.0, 3.0]])))
    assert margin == pytest.approx(1.0)
