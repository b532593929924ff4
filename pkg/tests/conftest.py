from pathlib import Path

import numpy as np
import pytest

from core.mesh.fixtures import annulus, random_boundary_curvatures, random_log_curvatures
from core.solver.assembly import interior_totals
from core.solver.solver_types import BoundaryData, Target

FIXTURES_DIR = Path(__file__).resolve().parent.parent / "fixtures"


def make_forward_problem(mesh, rng, spread=1.0):
    """Boundary data, a target known to be realizable, and the log-curvatures realizing it."""
    boundary_data = BoundaryData(random_boundary_curvatures(mesh, rng))
    s_true = random_log_curvatures(mesh, rng, spread)
    target = Target(interior_totals(s_true, mesh, boundary_data))
    return boundary_data, target, s_true


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def ring_mesh():
    return annulus(5, 1)


@pytest.fixture
def forward_problem():
    return make_forward_problem


@pytest.fixture
def fixtures_dir():
    return FIXTURES_DIR
