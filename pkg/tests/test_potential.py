import numpy as np
import pytest

from core.solver.assembly import assemble
from core.solver.potential import potential_energy


def test_zero_along_empty_segment(rng, ring_mesh, forward_problem):
    boundary_data, target, s_true = forward_problem(ring_mesh, rng)
    assert potential_energy(s_true, s_true, ring_mesh, boundary_data, target) == 0.0


def test_gradient_is_the_residual(rng, ring_mesh, forward_problem):
    boundary_data, target, _ = forward_problem(ring_mesh, rng)
    s = rng.uniform(-1.0, 1.0, size=ring_mesh.n_interior)
    residual = assemble(s, ring_mesh, boundary_data, target).residual
    h = 1e-5
    for i in range(ring_mesh.n_interior):
        e = np.zeros_like(s)
        e[i] = h
        slope = potential_energy(s + e, s - e, ring_mesh, boundary_data, target) / (2 * h)
        assert slope == pytest.approx(residual[i], rel=1e-6, abs=1e-9)


def test_path_independence(rng, ring_mesh, forward_problem):
    boundary_data, target, _ = forward_problem(ring_mesh, rng)
    a, b, c = (rng.uniform(-1.0, 1.0, size=ring_mesh.n_interior) for _ in range(3))
    direct = potential_energy(c, a, ring_mesh, boundary_data, target)
    via_b = potential_energy(b, a, ring_mesh, boundary_data, target) + potential_energy(c, b, ring_mesh, boundary_data, target)
    assert direct == pytest.approx(via_b, rel=1e-10, abs=1e-12)


def test_minimum_at_the_realizing_point(rng, ring_mesh, forward_problem):
    boundary_data, target, s_true = forward_problem(ring_mesh, rng)
    for _ in range(10):
        s = s_true + rng.normal(scale=0.5, size=ring_mesh.n_interior)
        assert potential_energy(s, s_true, ring_mesh, boundary_data, target) > 0
