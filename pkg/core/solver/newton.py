from typing import Optional

import numpy as np
import scipy.linalg
from scipy import sparse
from scipy.sparse.linalg import LinearOperator, cg, splu

from ..errors import (
    InfeasibleTargetError,
    JacobianInconsistencyError,
    NonPositiveCurvatureError,
    NotConvergedError,
    SingularSystemError,
)
from ..mesh.triangulation import Triangulation
from .assembly import assemble
from .feasibility import feasibility_check
from .potential import potential_energy
from .solver_types import NEWTON, SKIP, BoundaryData, SolveResult, SolverConfig, SolverState, Target, TraceRow

DENSE_LIMIT = 2000
CG_LIMIT = 50_000
CG_RTOL = 1e-13


def solve_spd(M: sparse.csr_matrix, rhs: np.ndarray) -> np.ndarray:
    """
    Solves M x = rhs for the symmetric, diagonally dominant Jacobian.

    Small systems use a dense Cholesky factorization (which also certifies
    positive definiteness), mid-size ones a sparse LU, and very large ones
    Jacobi-preconditioned conjugate gradients.
    """
    n = M.shape[0]
    try:
        if n <= DENSE_LIMIT:
            factor = scipy.linalg.cho_factor(M.toarray(), lower=True, check_finite=True)
            return scipy.linalg.cho_solve(factor, rhs)
        if n <= CG_LIMIT:
            return splu(M.tocsc()).solve(rhs)
        inverse_diag = 1.0 / M.diagonal()
        preconditioner = LinearOperator((n, n), matvec=lambda x: inverse_diag * x)
        x, info = cg(M, rhs, rtol=CG_RTOL, M=preconditioner, maxiter=10 * n)
        if info != 0:
            raise SingularSystemError(f"Conjugate gradients stopped with info={info}.")
        return x
    except (np.linalg.LinAlgError, RuntimeError, ValueError) as e:
        raise SingularSystemError(f"Jacobian factorization failed: {e}") from e


def initial_guess(mesh: Triangulation, config: SolverConfig) -> np.ndarray:
    if config.initial_s is None:
        return np.zeros(mesh.n_interior)
    s0 = np.asarray(config.initial_s, dtype=float)
    if s0.shape != (mesh.n_interior,):
        raise ValueError(f"initial_s must have {mesh.n_interior} entries, got shape {s0.shape}.")
    return s0.copy()


def precheck(mesh: Triangulation, target: Target, config: SolverConfig) -> None:
    if config.feasibility == SKIP:
        return
    verdict = feasibility_check(target, mesh, config.feasibility)
    if not verdict.feasible:
        raise InfeasibleTargetError(
            f"Target is outside the realizable polytope; witness subset {list(verdict.witness)}.",
            verdict.witness,
        )


def to_result(solver: str, state: SolverState, iterations: int, converged: bool, trace, mesh, boundary_data, target) -> SolveResult:
    """Packages a state, re-verifying the residual with a fresh assembly."""
    fresh = assemble(state.s, mesh, boundary_data, target, check=False)
    return SolveResult(
        solver=solver,
        k=fresh.k,
        s=fresh.s,
        T=fresh.T,
        faces=fresh.faces,
        iterations=iterations,
        converged=converged,
        residual_inf=fresh.residual_inf,
        trace=list(trace),
    )


def newton_solve(
    mesh: Triangulation,
    boundary_data: BoundaryData,
    target: Target,
    config: Optional[SolverConfig] = None,
) -> SolveResult:
    """
    Damped Newton on the convex potential Theta, whose gradient is T - T_hat
    and whose Hessian is M. Steps are accepted by the Armijo condition on
    Theta, evaluated by quadrature along the step.
    """
    config = config or SolverConfig()
    precheck(mesh, target, config)

    s = initial_guess(mesh, config)
    state = assemble(s, mesh, boundary_data, target)
    energy = 0.0
    trace = [TraceRow(0, 0.0, state.residual_inf, energy, 0.0)]
    iteration = 0

    def fail(message: str):
        result = to_result(NEWTON, state, iteration, False, trace, mesh, boundary_data, target)
        print(f"❌ Newton: {message}")
        return NotConvergedError(message, result)

    while state.residual_inf > config.tol:
        if iteration >= config.max_iter:
            raise fail(f"no convergence after {iteration} iterations (residual {state.residual_inf:.3e}).")
        iteration += 1

        direction = solve_spd(state.M, -state.residual)
        slope = float(state.residual @ direction)
        alpha = 1.0
        while True:
            trial = state.s + alpha * direction
            if np.all(np.abs(trial) <= config.s_limit):
                change = potential_energy(
                    trial, state.s, mesh, boundary_data, target, nodes=config.quadrature_nodes
                )
                if change <= config.armijo_c * alpha * slope:
                    try:
                        candidate = assemble(trial, mesh, boundary_data, target)
                        break
                    except (JacobianInconsistencyError, NonPositiveCurvatureError):
                        # trial point rejected like a failed Armijo test
                        pass
            alpha *= config.backtrack
            if alpha < config.min_step:
                if np.any(np.abs(state.s + direction) > config.s_limit):
                    raise fail("log-curvatures diverging; the target is likely infeasible.")
                raise fail(f"line search failed at iteration {iteration}.")

        energy += change
        state = candidate
        trace.append(TraceRow(iteration, float(iteration), state.residual_inf, energy, alpha))

    print(f"✅ Newton converged in {iteration} iterations (residual {state.residual_inf:.2e}).")
    return to_result(NEWTON, state, iteration, True, trace, mesh, boundary_data, target)
