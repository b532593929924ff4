"""
Pipeline steps behind each command. Every step reports through
`progress_callback(value, maximum, message)` and returns a process exit code.
"""
import math
import traceback
from pathlib import Path
from typing import Callable, Dict, List, Sequence, Tuple

import numpy as np

from core.analysis.comparison import compare_packings, make_pair, random_arc_chain, validate_chain
from core.errors import (
    HypothesisViolatedError,
    InfeasibleTargetError,
    InvalidChainError,
    JacobianInconsistencyError,
    LayoutNotConvergedError,
    NotConvergedError,
    PackingError,
    SingularSystemError,
    TooLargeForEnumerationError,
)
from core.files.file_schemas import Problem, RunConfig
from core.files.problem_files import (
    load_boundary_star,
    load_problem,
    load_result,
    write_json,
    write_result,
    write_trace,
)
from core.geometry.circles import arc_length, face_arrays
from core.layout.disk_layout import layout_face, measure_subarc, region_area
from core.layout.svg_editor import SvgOptions, render_svg
from core.mesh.fixtures import annulus, problem_json, random_boundary_curvatures, random_log_curvatures, wheel
from core.solver.assembly import interior_totals
from core.solver.calabi_flow import calabi_flow
from core.solver.feasibility import feasibility_check
from core.solver.newton import newton_solve
from core.solver.solver_types import CALABI, FLOW, NEWTON, SKIP, BoundaryData, SolveResult, SolverConfig

ProgressCallback = Callable[[float, float, str], None]

EXIT_OK = 0
EXIT_INVALID_INPUT = 1
EXIT_INFEASIBLE = 2
EXIT_NOT_CONVERGED = 3
EXIT_HYPOTHESIS_VIOLATED = 4
EXIT_COMPARISON_FAILED = 5
EXIT_LAYOUT_FAILED = 6

CROSS_CHECK_TOL = 1e-8


def _quiet(value: float, maximum: float, message: str) -> None:
    pass


def solver_config(config: RunConfig) -> SolverConfig:
    return SolverConfig(
        tol=config.tol,
        max_iter=config.max_iter,
        t_max=config.t_max,
        integrator=config.integrator,
        feasibility=config.feasibility,
    )


def solve_problem(problem: Problem, boundary_data: BoundaryData, solver: str, settings: SolverConfig) -> SolveResult:
    solve = calabi_flow if solver == CALABI else newton_solve
    return solve(problem.mesh, boundary_data, problem.target, settings)


def _mesh_report(problem: Problem) -> dict:
    mesh = problem.mesh
    return {
        "vertices": mesh.n_vertices,
        "faces": mesh.n_faces,
        "interior_vertices": list(mesh.interior_vertices),
        "boundary_vertices": list(mesh.boundary_vertices),
        "interior_edges": len(mesh.interior_edges()),
    }


def run_validate(config: RunConfig, progress_callback: ProgressCallback = _quiet) -> int:
    progress_callback(0, 2, f"Reading {config.problem}")
    problem = load_problem(config.problem)
    mode = FLOW if config.feasibility == SKIP else config.feasibility
    progress_callback(1, 2, f"Mesh is valid; checking feasibility ({mode})")
    verdict = feasibility_check(problem.target, problem.mesh, mode)

    report = {
        "mesh": _mesh_report(problem),
        "feasible": verdict.feasible,
        "mode": verdict.mode,
        "witness": list(verdict.witness),
    }
    if not verdict.feasible:
        report["witness_gap"] = verdict.witness_gap(problem.mesh, problem.target)
    write_json(config.out / "validate.json", report)

    if verdict.feasible:
        progress_callback(2, 2, "✅ feasible")
        return EXIT_OK
    print(f"❌ infeasible: witness subset {list(verdict.witness)}")
    progress_callback(2, 2, "infeasible")
    return EXIT_INFEASIBLE


def _save_solve(out: Path, suffix: str, result: SolveResult, problem: Problem) -> None:
    write_result(out / f"result{suffix}.json", result, problem.mesh, problem.boundary_data, problem.target)
    write_trace(out / f"trace{suffix}.csv", result.trace)


def run_solve(config: RunConfig, progress_callback: ProgressCallback = _quiet) -> int:
    progress_callback(0, 3, f"Reading {config.problem}")
    problem = load_problem(config.problem)
    settings = solver_config(config)
    solvers = [config.solver]
    if config.cross_check:
        solvers.append(NEWTON if config.solver == CALABI else CALABI)

    results: List[SolveResult] = []
    for index, solver in enumerate(solvers):
        progress_callback(1 + index, 1 + len(solvers), f"Solving with {solver}")
        suffix = "" if index == 0 else f"_{solver}"
        try:
            result = solve_problem(problem, problem.boundary_data, solver, settings)
        except NotConvergedError as e:
            if e.result is not None:
                _save_solve(config.out, suffix, e.result, problem)
            print(f"❌ {solver} did not converge: {e}")
            return EXIT_NOT_CONVERGED
        _save_solve(config.out, suffix, result, problem)
        results.append(result)

    if config.cross_check:
        gap = float(np.max(np.abs(results[0].s - results[1].s), initial=0.0))
        if gap > CROSS_CHECK_TOL:
            print(f"❌ solvers disagree: max |log k difference| = {gap:.3e}")
            return EXIT_NOT_CONVERGED
        print(f"✅ cross-check passed: max |log k difference| = {gap:.3e}")

    progress_callback(3, 3, f"Complete! Saved to {config.out}")
    return EXIT_OK


def _collect_chains(problem: Problem, extra: Sequence, config: RunConfig) -> List[Tuple[Tuple[int, int], ...]]:
    chains = [validate_chain(problem.mesh, c) for c in list(problem.chains) + list(extra)]
    rng = np.random.default_rng(config.seed)
    chains.extend(random_arc_chain(problem.mesh, rng) for _ in range(config.chain_count))
    return chains


def run_compare(config: RunConfig, progress_callback: ProgressCallback = _quiet) -> int:
    progress_callback(0, 4, f"Reading {config.problem} and {config.boundary_star}")
    problem = load_problem(config.problem)
    star_data, star_chains = load_boundary_star(config.boundary_star, problem.mesh)
    chains = _collect_chains(problem, star_chains, config)
    settings = solver_config(config)

    try:
        progress_callback(1, 4, "Solving P")
        P = solve_problem(problem, problem.boundary_data, config.solver, settings)
        progress_callback(2, 4, "Solving P*")
        P_star = solve_problem(problem, star_data, config.solver, settings)
    except NotConvergedError as e:
        print(f"❌ comparison needs two converged packings: {e}")
        return EXIT_NOT_CONVERGED

    progress_callback(3, 4, "Checking maximum principle and monotonicity")
    pair = make_pair(problem.mesh, problem.target, P, P_star, tol=config.tol)
    outcome = compare_packings(pair, chains)
    write_json(config.out / "comparison.json", outcome.to_json())

    if outcome.max_principle.violations:
        print(f"❌ maximum principle violated at vertices {outcome.max_principle.violations}")
        return EXIT_COMPARISON_FAILED
    if not outcome.hypothesis_holds:
        print("⚠️ boundary curvatures are not ordered; only the interior-maximum check was run.")
        progress_callback(4, 4, "Partial report written")
        return EXIT_HYPOTHESIS_VIOLATED
    if not outcome.all_hold:
        counts = outcome.schwarz_pick.violation_counts if outcome.schwarz_pick else {}
        print(f"❌ monotonicity violated: {counts}, dual curvatures ordered: {outcome.dual_monotone}")
        return EXIT_COMPARISON_FAILED

    progress_callback(4, 4, "✅ every comparison holds")
    return EXIT_OK


def run_layout(config: RunConfig, progress_callback: ProgressCallback = _quiet) -> int:
    loaded = load_result(config.result)
    if not loaded.converged:
        print(f"❌ {config.result} holds an unconverged solve (residual {loaded.residual_inf:.3e}); refusing to lay it out.")
        return EXIT_LAYOUT_FAILED

    mesh = loaded.mesh
    selected = list(range(mesh.n_faces)) if config.faces is None else list(config.faces)
    unknown = [f for f in selected if not 0 <= f < mesh.n_faces]
    if unknown:
        print(f"❌ faces {unknown} are not in the mesh (it has {mesh.n_faces}).")
        return EXIT_INVALID_INPUT

    options = SvgOptions(stroke_width=config.stroke_width, dual_stroke_width=config.dual_stroke_width)
    geometry = face_arrays(loaded.k[mesh.face_array])
    failed: Dict[int, str] = {}
    rows = []
    arc_error = 0.0
    area_error = 0.0
    for step, f in enumerate(selected):
        progress_callback(step, len(selected), f"Laying out face {f}")
        k1, k2, k3 = (float(loaded.k[v]) for v in mesh.faces[f].vertices)
        try:
            layout = layout_face(k1, k2, k3)
        except LayoutNotConvergedError as e:
            failed[f] = str(e)
            print(f"❌ face {f}: {e}")
            continue

        k_f = float(geometry.k_f[f])
        errors = [abs(measure_subarc(layout, slot) - float(arc_length(layout.curvatures[slot], k_f))) for slot in range(3)]
        area_gap = abs(region_area(layout) - (math.pi - float(np.sum(geometry.T[f]))))
        arc_error = max(arc_error, *errors)
        area_error = max(area_error, area_gap)
        rows.append({"face": f, "arc_error": max(errors), "area_error": area_gap, "iterations": layout.iterations})

        svg_path = config.out / f"face_{f}.svg"
        svg_path.parent.mkdir(parents=True, exist_ok=True)
        svg_path.write_text(render_svg([layout], options, titles=[f"face {f}"]), encoding="utf-8")

    write_json(config.out / "layout_summary.json", {
        "faces": rows,
        "failed": {str(f): message for f, message in failed.items()},
        "max_arc_error": arc_error,
        "max_area_error": area_error,
    })
    print(f"Cross-validation over {len(rows)} faces: max arc error {arc_error:.3e}, max area error {area_error:.3e}")

    if failed:
        return EXIT_LAYOUT_FAILED
    progress_callback(len(selected), len(selected), f"Complete! {len(rows)} SVG files in {config.out}")
    return EXIT_OK


def run_fixture(config: RunConfig, progress_callback: ProgressCallback = _quiet) -> int:
    """Writes problem.json and boundary_star.json for a seeded random instance with a realizable target."""
    rng = np.random.default_rng(config.seed)
    mesh = annulus(config.ring_size, config.rings) if config.kind == "annulus" else wheel(config.ring_size)
    progress_callback(0, 2, f"Generated {config.kind} with {mesh.n_vertices} vertices and {mesh.n_faces} faces")

    k_hat = random_boundary_curvatures(mesh, rng)
    # T(s) of a random packing always lies in the realizable set
    t_hat = interior_totals(random_log_curvatures(mesh, rng), mesh, BoundaryData(k_hat))
    chains = [[list(arc) for arc in random_arc_chain(mesh, rng)] for _ in range(config.chain_count)]

    write_json(config.out / "problem.json", problem_json(mesh, k_hat, t_hat))
    star = problem_json(mesh, config.star_scale * k_hat, t_hat, chains=chains)
    write_json(config.out / "boundary_star.json", {"boundary_k": star["boundary_k"], "chains": star["chains"]})
    progress_callback(2, 2, f"Complete! Saved to {config.out}")
    return EXIT_OK


COMMANDS = {
    "validate": run_validate,
    "solve": run_solve,
    "compare": run_compare,
    "layout": run_layout,
    "fixture": run_fixture,
}


def run(config: RunConfig, progress_callback: ProgressCallback = _quiet) -> int:
    """Runs one command and maps its failures onto the exit-code contract."""
    try:
        return COMMANDS[config.command](config, progress_callback)
    except InfeasibleTargetError as e:
        print(f"❌ {e}")
        return EXIT_INFEASIBLE
    except HypothesisViolatedError as e:
        print(f"⚠️ {e}")
        return EXIT_HYPOTHESIS_VIOLATED
    except (NotConvergedError, SingularSystemError, JacobianInconsistencyError) as e:
        print(f"❌ solver breakdown: {e}")
        return EXIT_NOT_CONVERGED
    except (TooLargeForEnumerationError, InvalidChainError) as e:
        print(f"❌ {e}")
        return EXIT_INVALID_INPUT
    except PackingError as e:
        print(f"❌ invalid input: {type(e).__name__}: {e}")
        return EXIT_INVALID_INPUT
    except ValueError as e:
        print(f"❌ invalid input: {e}")
        return EXIT_INVALID_INPUT
    except Exception as e:
        traceback.print_exc()
        print(f"An error occurred: {e}")
        return EXIT_LAYOUT_FAILED if config.command == "layout" else EXIT_INVALID_INPUT
