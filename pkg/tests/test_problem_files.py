import csv
import json

import numpy as np
import pytest

from core.errors import (
    BoundaryMismatchError,
    NotInteriorVertexError,
    ProblemFileError,
    UnknownVertexError,
)
from core.files.problem_files import load_boundary_star, load_problem, load_result, write_result, write_trace
from core.solver.newton import newton_solve


def _problem_dict(fixtures_dir):
    return json.loads((fixtures_dir / "annulus_problem.json").read_text())


def _dump(tmp_path, data, name="problem.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data), encoding="utf-8")
    return path


def test_shipped_problem_loads_in_mesh_order(fixtures_dir):
    problem = load_problem(fixtures_dir / "annulus_problem.json")
    assert problem.mesh.boundary_vertices == (0, 1, 2, 3, 4, 10, 11, 12, 13, 14)
    assert problem.boundary_data.k_hat[3] == 2.0
    assert problem.target.T_hat[0] == 4.0
    assert problem.chains == []

    star, chains = load_boundary_star(fixtures_dir / "annulus_boundary_star.json", problem.mesh)
    np.testing.assert_allclose(star.k_hat, 0.7 * problem.boundary_data.k_hat)
    assert chains[0] == ((0, 0), (9, 0), (8, 0))


@pytest.mark.parametrize(
    "field, key, error",
    [
        ("boundary_k", "99", UnknownVertexError),
        ("boundary_k", "5", BoundaryMismatchError),
        ("target_T", "0", NotInteriorVertexError),
    ],
)
def test_vertex_keys_are_checked(fixtures_dir, tmp_path, field, key, error):
    data = _problem_dict(fixtures_dir)
    data[field][key] = 1.0
    with pytest.raises(error):
        load_problem(_dump(tmp_path, data))


def test_schema_errors_name_the_field(fixtures_dir, tmp_path):
    data = _problem_dict(fixtures_dir)
    data["target_T"]["5"] = "hot"
    with pytest.raises(ProblemFileError, match="target_T"):
        load_problem(_dump(tmp_path, data))

    data = _problem_dict(fixtures_dir)
    data["boundary_k"]["x"] = 1.0
    with pytest.raises(ProblemFileError, match="not an integer id"):
        load_problem(_dump(tmp_path, data))

    del data["mesh"]
    with pytest.raises(ProblemFileError, match="mesh"):
        load_problem(_dump(tmp_path, data))


def test_syntax_errors_carry_line_and_column(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{\n  "mesh": {,\n}', encoding="utf-8")
    with pytest.raises(ProblemFileError, match=r"broken\.json:2:"):
        load_problem(path)
    path.write_text("[1, 2]", encoding="utf-8")
    with pytest.raises(ProblemFileError, match="JSON object"):
        load_problem(path)


def test_result_file_reloads_exactly(fixtures_dir, tmp_path):
    problem = load_problem(fixtures_dir / "annulus_problem.json")
    result = newton_solve(problem.mesh, problem.boundary_data, problem.target)
    path = write_result(tmp_path / "result.json", result, problem.mesh, problem.boundary_data, problem.target)

    loaded = load_result(path)
    assert loaded.converged
    assert loaded.solver == "newton"
    assert loaded.mesh.faces == problem.mesh.faces
    assert np.array_equal(loaded.k, result.k)

    data = json.loads(path.read_text())
    face = data["faces"][0]
    assert face["vertices"] == list(problem.mesh.faces[0].vertices)
    assert face["area"] == pytest.approx(np.pi - sum(face["T"]), abs=1e-12)


def test_trace_rows_use_full_precision(fixtures_dir, tmp_path):
    problem = load_problem(fixtures_dir / "annulus_problem.json")
    result = newton_solve(problem.mesh, problem.boundary_data, problem.target)
    path = write_trace(tmp_path / "trace.csv", result.trace)
    with path.open() as handle:
        rows = list(csv.DictReader(handle))
    assert len(rows) == len(result.trace)
    assert [int(row["step"]) for row in rows] == list(range(len(rows)))
    assert float(rows[-1]["residual_inf"]) == result.trace[-1].residual_inf
