from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
from scipy import sparse

from ..errors import NonPositiveCurvatureError
from ..geometry.geometry_types import FaceGeometryBatch
from ..shared import (
    DEFAULT_DT_INIT,
    DEFAULT_INTEGRATOR,
    DEFAULT_MAX_ITER,
    DEFAULT_MAX_STEPS,
    DEFAULT_T_MAX,
    DEFAULT_TOL,
)

NEWTON = "newton"
CALABI = "calabi"
EULER = "euler"
RK4 = "rk4"

ENUMERATE = "enumerate"
FLOW = "flow"
SKIP = "skip"


@dataclass(frozen=True)
class BoundaryData:
    k_hat: np.ndarray  # indexed by boundary_index

    def __post_init__(self):
        k = np.asarray(self.k_hat, dtype=float)
        if k.ndim != 1 or not np.all(np.isfinite(k)) or np.any(k <= 0):
            raise NonPositiveCurvatureError("Boundary curvatures must be positive and finite.")
        object.__setattr__(self, "k_hat", k)


@dataclass(frozen=True)
class Target:
    T_hat: np.ndarray  # indexed by interior_index

    def __post_init__(self):
        t = np.asarray(self.T_hat, dtype=float)
        if t.ndim != 1 or not np.all(np.isfinite(t)) or np.any(t <= 0):
            raise ValueError("Target total curvatures must be positive and finite.")
        object.__setattr__(self, "T_hat", t)


@dataclass
class SolverConfig:
    tol: float = DEFAULT_TOL
    max_iter: int = DEFAULT_MAX_ITER
    initial_s: Optional[np.ndarray] = None
    feasibility: str = SKIP
    # Newton line search
    armijo_c: float = 1e-4
    backtrack: float = 0.5
    min_step: float = 2.0**-30
    quadrature_nodes: int = 32
    # Calabi flow
    integrator: str = DEFAULT_INTEGRATOR
    dt_init: float = DEFAULT_DT_INIT
    dt_max: float = 10.0
    dt_min: float = 1e-14
    dt_grow: float = 1.2
    grow_after: int = 10
    t_max: float = DEFAULT_T_MAX
    max_steps: int = DEFAULT_MAX_STEPS
    # |s_i| beyond this means the curvatures are running to 0 or infinity
    s_limit: float = 50.0

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.integrator not in (EULER, RK4):
            raise ValueError(f"Unknown integrator '{self.integrator}'")
        if self.feasibility not in (ENUMERATE, FLOW, SKIP):
            raise ValueError(f"Unknown feasibility mode '{self.feasibility}'")


@dataclass(frozen=True)
class TraceRow:
    step: int
    time: float
    residual_inf: float
    energy_monitor: float
    dt: float


@dataclass
class SolverState:
    s: np.ndarray
    T: np.ndarray
    residual: np.ndarray
    M: sparse.csr_matrix
    faces: FaceGeometryBatch
    k: np.ndarray  # full curvature vector on V
    dominance_margin: float

    @property
    def residual_inf(self) -> float:
        return float(np.max(np.abs(self.residual))) if self.residual.size else 0.0

    @property
    def quadratic_monitor(self) -> float:
        """(T - T_hat)^T M (T - T_hat)."""
        return float(self.residual @ (self.M @ self.residual))


@dataclass
class SolveResult:
    solver: str
    k: np.ndarray
    s: np.ndarray
    T: np.ndarray
    faces: FaceGeometryBatch
    iterations: int
    converged: bool
    residual_inf: float
    trace: List[TraceRow] = field(default_factory=list)
