from dataclasses import dataclass, field
from pathlib import Path
from typing import Annotated, Dict, List, Literal, Optional, Tuple

import numpy as np
from pydantic import AfterValidator, BaseModel, ConfigDict, Field, field_validator, model_validator

from ..mesh.triangulation import Triangulation
from ..shared import (
    DEFAULT_FEASIBILITY,
    DEFAULT_INTEGRATOR,
    DEFAULT_MAX_ITER,
    DEFAULT_OUT_DIR,
    DEFAULT_T_MAX,
    DEFAULT_TOL,
)
from ..solver.solver_types import BoundaryData, Target

ArcPair = Tuple[int, int]


def _check_vertex_keys(values: Dict[str, float]) -> Dict[str, float]:
    for key, value in values.items():
        if not key.lstrip("-").isdigit():
            raise ValueError(f"vertex key '{key}' is not an integer id")
        if not value > 0 or not np.isfinite(value):
            raise ValueError(f"value for vertex {key} must be positive and finite, got {value}")
    return values


VertexValues = Annotated[Dict[str, float], AfterValidator(_check_vertex_keys)]


class VertexEntry(BaseModel):
    model_config = ConfigDict(extra="allow")
    id: int


class MeshFile(BaseModel):
    vertices: List[VertexEntry]
    faces: List[List[int]]
    boundary: Optional[List[int]] = None


class ProblemFile(BaseModel):
    mesh: MeshFile
    boundary_k: VertexValues
    target_T: VertexValues
    chains: List[List[ArcPair]] = Field(default_factory=list)


class BoundaryStarFile(BaseModel):
    boundary_k: VertexValues
    chains: List[List[ArcPair]] = Field(default_factory=list)


class FaceRecord(BaseModel):
    face: int
    vertices: Tuple[int, int, int]
    k_f: float
    l: Tuple[float, float, float]
    T: Tuple[float, float, float]
    area: float


class ResultFile(BaseModel):
    solver: str
    converged: bool
    iterations: int
    residual_inf: float
    mesh: MeshFile
    boundary_k: Dict[str, float]
    target_T: Dict[str, float]
    k: Dict[str, float]
    T: Dict[str, float]
    faces: List[FaceRecord]


class RunConfig(BaseModel):
    """Settings for one command-line run; flags override the environment defaults."""
    command: Literal["validate", "solve", "compare", "layout", "fixture"]
    problem: Optional[Path] = None
    boundary_star: Optional[Path] = None
    result: Optional[Path] = None
    solver: Literal["newton", "calabi"] = "newton"
    tol: float = DEFAULT_TOL
    max_iter: int = Field(default=DEFAULT_MAX_ITER, gt=0)
    t_max: float = Field(default=DEFAULT_T_MAX, gt=0)
    integrator: Literal["euler", "rk4"] = DEFAULT_INTEGRATOR  # type: ignore[assignment]
    feasibility: Literal["enumerate", "flow", "skip"] = DEFAULT_FEASIBILITY  # type: ignore[assignment]
    cross_check: bool = False
    out: Path = Path(DEFAULT_OUT_DIR)
    seed: int = 0
    faces: Optional[List[int]] = None
    stroke_width: float = Field(default=1.5, gt=0)
    dual_stroke_width: float = Field(default=1.0, gt=0)
    # fixture generator
    kind: Literal["annulus", "wheel"] = "annulus"
    ring_size: int = Field(default=6, ge=3)
    rings: int = Field(default=1, ge=1)
    star_scale: float = Field(default=0.7, gt=0)
    chain_count: int = Field(default=0, ge=0)

    @field_validator("tol")
    @classmethod
    def _positive_tol(cls, value: float) -> float:
        if not value > 0:
            raise ValueError("tol must be positive")
        return value

    @model_validator(mode="after")
    def _inputs_exist(self) -> "RunConfig":
        needed = {
            "validate": ("problem",),
            "solve": ("problem",),
            "compare": ("problem", "boundary_star"),
            "layout": ("result",),
            "fixture": (),
        }[self.command]
        for name in needed:
            path = getattr(self, name)
            if path is None:
                raise ValueError(f"{self.command} needs a {name.replace('_', ' ')} file")
            if not Path(path).is_file():
                raise ValueError(f"{name.replace('_', ' ')} file not found: {path}")
        return self


@dataclass
class Problem:
    """A parsed problem: mesh plus boundary and target data in mesh order."""
    mesh: Triangulation
    boundary_data: BoundaryData
    target: Target
    chains: List[Tuple[ArcPair, ...]] = field(default_factory=list)


@dataclass
class LoadedResult:
    mesh: Triangulation
    solver: str
    converged: bool
    residual_inf: float
    k: np.ndarray
