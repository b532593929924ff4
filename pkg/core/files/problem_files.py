"""
Readers and writers for problem, boundary, result, comparison and trace files.

Input JSON goes through the pydantic schemas before any mesh is built, so a
malformed file fails with a field path or a line/column, never a KeyError.
Floats are written with repr, which round-trips doubles exactly.
"""
import csv
import json
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple, Type, TypeVar

import numpy as np
from pydantic import BaseModel, ValidationError

from ..errors import BoundaryMismatchError, NotInteriorVertexError, ProblemFileError, UnknownVertexError
from ..mesh.triangulation import Triangulation, triangulation_from_json
from ..solver.solver_types import BoundaryData, SolveResult, Target, TraceRow
from .file_schemas import (
    ArcPair,
    BoundaryStarFile,
    LoadedResult,
    Problem,
    ProblemFile,
    ResultFile,
)

Model = TypeVar("Model", bound=BaseModel)

TRACE_COLUMNS = ("step", "time", "residual_inf", "energy_monitor", "dt")


def read_json(path: Path) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ProblemFileError(f"{path}: cannot read file ({e.strerror}).") from e
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as e:
        raise ProblemFileError(f"{path}:{e.lineno}:{e.colno}: {e.msg}") from e
    if not isinstance(payload, dict):
        raise ProblemFileError(f"{path}: top level must be a JSON object.")
    return payload


def parse_model(model: Type[Model], payload: dict, path: Path) -> Model:
    try:
        return model.model_validate(payload)
    except ValidationError as e:
        problems = [
            f"{'.'.join(str(part) for part in err['loc']) or '<root>'}: {err['msg']}"
            for err in e.errors()
        ]
        raise ProblemFileError(f"{path}: " + "; ".join(problems)) from e


def _vertex_values(
    values: Mapping[str, float],
    mesh: Triangulation,
    expected: Sequence[int],
    field: str,
    path: Path,
) -> np.ndarray:
    """Orders a {vertex id: value} map along `expected`, checking every key."""
    expected_set = set(expected)
    by_vertex: Dict[int, float] = {}
    for key, value in values.items():
        v = int(key)
        if not 0 <= v < mesh.n_vertices:
            raise UnknownVertexError(f"{path}: {field} names undeclared vertex {v}.")
        if v not in expected_set:
            if field == "target_T":
                raise NotInteriorVertexError(f"{path}: target_T names boundary vertex {v}.")
            raise BoundaryMismatchError(f"{path}: {field} names interior vertex {v}.")
        by_vertex[v] = float(value)
    missing = [v for v in expected if v not in by_vertex]
    if missing:
        raise ProblemFileError(f"{path}: {field} is missing vertices {missing}.")
    return np.array([by_vertex[v] for v in expected], dtype=float)


def _chains(raw: Iterable[Iterable[ArcPair]]) -> List[Tuple[ArcPair, ...]]:
    return [tuple((int(f), int(v)) for f, v in chain) for chain in raw]


def load_problem(path: Path) -> Problem:
    model = parse_model(ProblemFile, read_json(path), path)
    mesh = triangulation_from_json(model.mesh.model_dump())
    k_hat = _vertex_values(model.boundary_k, mesh, mesh.boundary_vertices, "boundary_k", path)
    t_hat = _vertex_values(model.target_T, mesh, mesh.interior_vertices, "target_T", path)
    return Problem(
        mesh=mesh,
        boundary_data=BoundaryData(k_hat),
        target=Target(t_hat),
        chains=_chains(model.chains),
    )


def load_boundary_star(path: Path, mesh: Triangulation) -> Tuple[BoundaryData, List[Tuple[ArcPair, ...]]]:
    model = parse_model(BoundaryStarFile, read_json(path), path)
    k_hat = _vertex_values(model.boundary_k, mesh, mesh.boundary_vertices, "boundary_k", path)
    return BoundaryData(k_hat), _chains(model.chains)


def load_result(path: Path) -> LoadedResult:
    model = parse_model(ResultFile, read_json(path), path)
    mesh = triangulation_from_json(model.mesh.model_dump())
    k = _vertex_values(model.k, mesh, range(mesh.n_vertices), "k", path)
    return LoadedResult(
        mesh=mesh,
        solver=model.solver,
        converged=model.converged,
        residual_inf=model.residual_inf,
        k=k,
    )


def result_json(result: SolveResult, mesh: Triangulation, boundary_data: BoundaryData, target: Target) -> dict:
    return {
        "solver": result.solver,
        "converged": result.converged,
        "iterations": result.iterations,
        "residual_inf": result.residual_inf,
        "mesh": mesh.to_json(),
        "boundary_k": {str(v): float(boundary_data.k_hat[i]) for i, v in enumerate(mesh.boundary_vertices)},
        "target_T": {str(v): float(target.T_hat[i]) for i, v in enumerate(mesh.interior_vertices)},
        "k": {str(v): float(result.k[v]) for v in range(mesh.n_vertices)},
        "T": {str(v): float(result.T[i]) for i, v in enumerate(mesh.interior_vertices)},
        "faces": [
            {"face": f, "vertices": list(face.vertices), **result.faces.face(f).to_json()}
            for f, face in enumerate(mesh.faces)
        ],
    }


def write_json(path: Path, data: dict) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(data, indent=2) + "\n", encoding="utf-8")
    return path


def write_result(
    path: Path,
    result: SolveResult,
    mesh: Triangulation,
    boundary_data: BoundaryData,
    target: Target,
) -> Path:
    return write_json(path, result_json(result, mesh, boundary_data, target))


def write_trace(path: Path, trace: Sequence[TraceRow]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(TRACE_COLUMNS)
        for row in trace:
            writer.writerow([
                str(row.step),
                "%.17g" % row.time,
                "%.17g" % row.residual_inf,
                "%.17g" % row.energy_monitor,
                "%.17g" % row.dt,
            ])
    return path
