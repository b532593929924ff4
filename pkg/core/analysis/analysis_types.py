from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from ..mesh.triangulation import Triangulation
from ..solver.solver_types import SolveResult, Target

# An arc is (face index, vertex id): the sub-arc of C_vertex inside the dual circle of the face.
Arc = Tuple[int, int]


@dataclass(frozen=True)
class PackingPair:
    mesh: Triangulation
    target: Target
    P: SolveResult
    P_star: SolveResult


@dataclass
class MaxPrincipleReport:
    ordered: bool
    boundary_ordered: bool
    max_ratio: float
    max_ratio_location: int
    max_ratio_band: Tuple[int, ...]
    ratios: List[float]
    violations: List[int] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "ordered": self.ordered,
            "boundary_ordered": self.boundary_ordered,
            "max_ratio": self.max_ratio,
            "max_ratio_location": self.max_ratio_location,
            "max_ratio_band": list(self.max_ratio_band),
            "ratios": {str(v): r for v, r in enumerate(self.ratios)},
            "violations": list(self.violations),
        }


@dataclass(frozen=True)
class VertexRow:
    vertex: int
    boundary: bool
    k: float
    k_star: float
    ratio: float
    ok: bool


@dataclass(frozen=True)
class FaceRow:
    face: int
    area: float
    area_star: float
    k_f: float
    k_f_star: float
    ok: bool


@dataclass(frozen=True)
class ArcRow:
    face: int
    vertex: int
    l: float
    l_star: float
    ok: bool


@dataclass(frozen=True)
class ChainRow:
    chain: Tuple[Arc, ...]
    d: float
    d_star: float
    ok: bool


@dataclass
class ComparisonReport:
    vertices: List[VertexRow]
    faces: List[FaceRow]
    arcs: List[ArcRow]
    chains: List[ChainRow]
    max_ratio: float
    max_ratio_location: int

    @property
    def violation_counts(self) -> dict:
        return {
            "vertices": sum(not r.ok for r in self.vertices),
            "faces": sum(not r.ok for r in self.faces),
            "arcs": sum(not r.ok for r in self.arcs),
            "chains": sum(not r.ok for r in self.chains),
        }

    @property
    def holds(self) -> bool:
        return not any(self.violation_counts.values())

    def to_json(self) -> dict:
        return {
            "vertices": [
                {"vertex": r.vertex, "boundary": r.boundary, "k": r.k, "k_star": r.k_star,
                 "ratio": r.ratio, "ok": r.ok}
                for r in self.vertices
            ],
            "faces": [
                {"face": r.face, "area": r.area, "area_star": r.area_star,
                 "area_difference": r.area_star - r.area, "k_f": r.k_f, "k_f_star": r.k_f_star, "ok": r.ok}
                for r in self.faces
            ],
            "arcs": [
                {"face": r.face, "vertex": r.vertex, "l": r.l, "l_star": r.l_star,
                 "difference": r.l_star - r.l, "ok": r.ok}
                for r in self.arcs
            ],
            "chains": [
                {"chain": [list(a) for a in r.chain], "d": r.d, "d_star": r.d_star, "ok": r.ok}
                for r in self.chains
            ],
            "max_ratio": self.max_ratio,
            "max_ratio_location": self.max_ratio_location,
            "summary": {"violations": self.violation_counts, "holds": self.holds},
        }


@dataclass
class ComparisonOutcome:
    """Everything `compare` produces for one pair."""
    max_principle: MaxPrincipleReport
    hypothesis_holds: bool
    schwarz_pick: Optional[ComparisonReport] = None
    dual_monotone: Optional[bool] = None

    @property
    def all_hold(self) -> bool:
        if self.max_principle.violations:
            return False
        if not self.hypothesis_holds:
            return True
        return bool(self.schwarz_pick and self.schwarz_pick.holds and self.dual_monotone)

    def to_json(self) -> dict:
        return {
            "hypothesis_holds": self.hypothesis_holds,
            "max_principle": self.max_principle.to_json(),
            "schwarz_pick": self.schwarz_pick.to_json() if self.schwarz_pick else None,
            "dual_monotone": self.dual_monotone,
            "all_hold": self.all_hold,
        }
