from typing import Callable, Optional, Tuple

import numpy as np

from ..errors import JacobianInconsistencyError, NonPositiveCurvatureError, NotConvergedError
from ..mesh.triangulation import Triangulation
from .assembly import assemble
from .newton import initial_guess, precheck, to_result
from .solver_types import CALABI, EULER, BoundaryData, SolveResult, SolverConfig, SolverState, Target, TraceRow


def _velocity(state: SolverState) -> np.ndarray:
    # ds/dt = -M^T (T - T_hat); M is asserted symmetric at assembly
    return -(state.M.T @ state.residual)


def _euler_step(state: SolverState, dt: float, evaluate: Callable[[np.ndarray], SolverState]) -> np.ndarray:
    return state.s + dt * _velocity(state)


def _rk4_step(state: SolverState, dt: float, evaluate: Callable[[np.ndarray], SolverState]) -> np.ndarray:
    k1 = _velocity(state)
    k2 = _velocity(evaluate(state.s + 0.5 * dt * k1))
    k3 = _velocity(evaluate(state.s + 0.5 * dt * k2))
    k4 = _velocity(evaluate(state.s + dt * k3))
    return state.s + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def calabi_flow(
    mesh: Triangulation,
    boundary_data: BoundaryData,
    target: Target,
    config: Optional[SolverConfig] = None,
) -> SolveResult:
    """
    Integrates the combinatorial Calabi flow ds/dt = -M^T (T - T_hat).

    A step is accepted only if the monitor (T - T_hat)^T M (T - T_hat) does not
    increase; otherwise dt is halved and the step retried. After `grow_after`
    consecutive accepted steps dt grows by `dt_grow`.
    """
    config = config or SolverConfig()
    precheck(mesh, target, config)
    step = _euler_step if config.integrator == EULER else _rk4_step

    def evaluate(s: np.ndarray) -> SolverState:
        return assemble(s, mesh, boundary_data, target)

    state = evaluate(initial_guess(mesh, config))
    monitor = state.quadratic_monitor
    t = 0.0
    dt = config.dt_init
    accepted = 0
    streak = 0
    trace = [TraceRow(0, t, state.residual_inf, monitor, dt)]

    def fail(message: str):
        result = to_result(CALABI, state, accepted, False, trace, mesh, boundary_data, target)
        print(f"❌ Calabi flow: {message}")
        return NotConvergedError(message, result)

    while state.residual_inf > config.tol:
        if t >= config.t_max or accepted >= config.max_steps:
            raise fail(f"stopped at t={t:.4g} after {accepted} steps (residual {state.residual_inf:.3e}).")
        if np.any(np.abs(state.s) > config.s_limit):
            raise fail("log-curvatures diverging; the target is likely infeasible.")

        candidate, candidate_monitor = _attempt(state, dt, step, evaluate, config)
        if candidate is None or candidate_monitor > monitor:
            dt *= 0.5
            streak = 0
            if dt < config.dt_min:
                raise fail(f"time step underflow at t={t:.4g} (residual {state.residual_inf:.3e}).")
            continue

        t += dt
        accepted += 1
        streak += 1
        state, monitor = candidate, candidate_monitor
        trace.append(TraceRow(accepted, t, state.residual_inf, monitor, dt))
        if streak >= config.grow_after:
            dt = min(dt * config.dt_grow, config.dt_max)
            streak = 0

    print(f"✅ Calabi flow converged at t={t:.4g} after {accepted} steps (residual {state.residual_inf:.2e}).")
    return to_result(CALABI, state, accepted, True, trace, mesh, boundary_data, target)


def _attempt(
    state: SolverState,
    dt: float,
    step: Callable,
    evaluate: Callable[[np.ndarray], SolverState],
    config: SolverConfig,
) -> Tuple[Optional[SolverState], float]:
    try:
        s_new = step(state, dt, evaluate)
        if not np.all(np.isfinite(s_new)) or np.any(np.abs(s_new) > 2.0 * config.s_limit):
            return None, np.inf
        candidate = evaluate(s_new)
    except (NonPositiveCurvatureError, JacobianInconsistencyError):
        # an intermediate stage overflowed exp(s) or lost derivative consistency
        return None, np.inf
    return candidate, candidate.quadratic_monitor
