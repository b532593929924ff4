"""
Membership test for the open polytope of realizable interior targets:

    sum_{v in I} T_hat_v < pi * |F_I|   for every nonempty I of interior vertices.

`enumerate` checks every subset directly. `flow` routes T_hat through the
vertex -> face incidence network (faces can absorb pi each) and reads the
witness off a minimum cut.
"""
import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Tuple

import networkx as nx
import numpy as np

from ..errors import TooLargeForEnumerationError
from ..mesh.triangulation import Triangulation
from ..shared import ENUMERATION_LIMIT
from .solver_types import ENUMERATE, FLOW, Target

# Strictness margins: absolute 1e-12 for enumeration, relative 1e-9 for flow.
# Targets within about 1e-9 of a facet may get different verdicts from the two modes.
ENUMERATION_SLACK = 1e-12
FLOW_INFLATION = 1e-9
# capacities are scaled to integers so the max-flow runs exactly
CAPACITY_SCALE = 2**40

SOURCE = "source"
SINK = "sink"


@dataclass(frozen=True)
class FeasibilityVerdict:
    feasible: bool
    witness: Tuple[int, ...] = field(default=())  # interior vertex ids
    mode: str = FLOW

    def witness_gap(self, mesh: Triangulation, target: Target) -> float:
        """pi |F_I| - sum_{v in I} T_hat_v for the witness (<= 0 means the inequality fails)."""
        total = sum(target.T_hat[mesh.interior_index[v]] for v in self.witness)
        return math.pi * mesh.coverage(self.witness) - total


def _enumerate(target: Target, mesh: Triangulation) -> FeasibilityVerdict:
    n = mesh.n_interior
    if n > ENUMERATION_LIMIT:
        raise TooLargeForEnumerationError(
            f"Subset enumeration is limited to {ENUMERATION_LIMIT} interior vertices, mesh has {n}."
        )
    vertices = mesh.interior_vertices
    masks = [mesh.star_mask(v) for v in vertices]
    t_hat = target.T_hat
    for size in range(1, n + 1):
        for subset in combinations(range(n), size):
            mask = 0
            total = 0.0
            for i in subset:
                mask |= masks[i]
                total += t_hat[i]
            if total >= math.pi * bin(mask).count("1") - ENUMERATION_SLACK:
                return FeasibilityVerdict(False, tuple(vertices[i] for i in subset), ENUMERATE)
    return FeasibilityVerdict(True, (), ENUMERATE)


def incidence_network(target: Target, mesh: Triangulation, inflation: float = FLOW_INFLATION) -> nx.DiGraph:
    """source -> vertex (T_hat_v) -> face (unbounded) -> sink (pi)."""
    graph = nx.DiGraph()
    graph.add_node(SOURCE)
    graph.add_node(SINK)
    face_capacity = math.floor(math.pi * CAPACITY_SCALE)
    used_faces = set()
    for i, v in enumerate(mesh.interior_vertices):
        demand = math.ceil(float(target.T_hat[i]) * (1.0 + inflation) * CAPACITY_SCALE)
        graph.add_edge(SOURCE, ("vertex", v), capacity=demand)
        for f in mesh.star(v):
            graph.add_edge(("vertex", v), ("face", f))
            used_faces.add(f)
    for f in sorted(used_faces):
        graph.add_edge(("face", f), SINK, capacity=face_capacity)
    return graph


def _flow(target: Target, mesh: Triangulation) -> FeasibilityVerdict:
    graph = incidence_network(target, mesh)
    demand = sum(graph[SOURCE][node]["capacity"] for node in graph.successors(SOURCE))
    cut_value, (reachable, _) = nx.minimum_cut(graph, SOURCE, SINK)
    if cut_value >= demand:
        return FeasibilityVerdict(True, (), FLOW)
    witness = tuple(sorted(node[1] for node in reachable if isinstance(node, tuple) and node[0] == "vertex"))
    return FeasibilityVerdict(False, witness, FLOW)


def feasibility_check(target: Target, mesh: Triangulation, mode: str = FLOW) -> FeasibilityVerdict:
    """
    Decides whether `target` lies in the open polytope. Infeasible verdicts
    carry a witness subset I of interior vertices violating the inequality.
    """
    if len(target.T_hat) != mesh.n_interior:
        raise ValueError(f"Target has {len(target.T_hat)} entries, mesh has {mesh.n_interior} interior vertices.")
    if np.any(target.T_hat <= 0):
        raise ValueError("Target total curvatures must be positive.")
    if mode == ENUMERATE:
        return _enumerate(target, mesh)
    if mode == FLOW:
        return _flow(target, mesh)
    raise ValueError(f"Unknown feasibility mode '{mode}'")
