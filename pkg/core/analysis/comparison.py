"""
Comparison of two packings that share the mesh and the interior targets but
differ in boundary curvatures: the maximum principle for k*/k and the
monotonicity of areas, sub-arc lengths, dual curvatures and arc-chain
distances when the boundary curvatures shrink.
"""
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..errors import (
    HypothesisViolatedError,
    InvalidChainError,
    MeshMismatchError,
    OrderingNotEstablishedError,
    TargetMismatchError,
)
from ..geometry.circles import face_arrays
from ..mesh.triangulation import Triangulation, edge_key
from ..solver.solver_types import SolveResult, Target
from .analysis_types import (
    Arc,
    ArcRow,
    ChainRow,
    ComparisonOutcome,
    ComparisonReport,
    FaceRow,
    MaxPrincipleReport,
    PackingPair,
    VertexRow,
)

RATIO_BAND = 1e-12
ORDER_RTOL = 1e-10
DUAL_RTOL = 1e-12
TARGET_ATOL = 1e-8
TARGET_SLACK = 1e-6


def make_pair(
    mesh: Triangulation,
    target: Target,
    P: SolveResult,
    P_star: SolveResult,
    target_star: Optional[Target] = None,
    tol: Optional[float] = None,
) -> PackingPair:
    """
    Pairs two converged packings. Each must reproduce the shared target to the
    solve tolerance `tol` (or its own final residual, whichever is larger).
    """
    for name, result in (("P", P), ("P*", P_star)):
        if len(result.k) != mesh.n_vertices or len(result.faces) != mesh.n_faces:
            raise MeshMismatchError(f"Packing {name} was not solved on this mesh.")
        if not result.converged:
            raise ValueError(f"Packing {name} did not converge.")
        limit = max(TARGET_ATOL if tol is None else tol, result.residual_inf) * (1.0 + TARGET_SLACK)
        if np.max(np.abs(result.T - target.T_hat), initial=0.0) > limit:
            raise TargetMismatchError(f"Packing {name} does not realize the shared interior target.")
    if target_star is not None and not np.array_equal(target.T_hat, target_star.T_hat):
        raise TargetMismatchError("The two packings were solved for different interior targets.")
    return PackingPair(mesh=mesh, target=target, P=P, P_star=P_star)


def _ratios(pair: PackingPair) -> np.ndarray:
    return pair.P_star.k / pair.P.k


def _boundary_ordered(pair: PackingPair) -> bool:
    b = list(pair.mesh.boundary_vertices)
    return bool(np.all(pair.P_star.k[b] <= pair.P.k[b] * (1.0 + ORDER_RTOL)))


def _max_location(pair: PackingPair, ratios: np.ndarray) -> Tuple[float, Tuple[int, ...], int]:
    max_ratio = float(np.max(ratios))
    band = tuple(int(v) for v in np.flatnonzero(ratios >= max_ratio - RATIO_BAND))
    on_boundary = [v for v in band if pair.mesh.is_boundary[v]]
    return max_ratio, band, (on_boundary[0] if on_boundary else band[0])


def max_principle_check(pair: PackingPair) -> MaxPrincipleReport:
    """
    (a) a maximum of k*/k above 1 is attained on the boundary;
    (b) k* <= k on the boundary forces k* <= k everywhere.
    """
    ratios = _ratios(pair)
    max_ratio, band, location = _max_location(pair, ratios)
    boundary_ordered = _boundary_ordered(pair)
    violations: List[int] = []

    if max_ratio > 1.0 + RATIO_BAND and not any(pair.mesh.is_boundary[v] for v in band):
        violations.extend(band)
    if boundary_ordered:
        above = np.flatnonzero(pair.P_star.k > pair.P.k * (1.0 + ORDER_RTOL))
        violations.extend(int(v) for v in above if int(v) not in violations)

    ordered = bool(np.all(pair.P_star.k <= pair.P.k * (1.0 + ORDER_RTOL)))
    return MaxPrincipleReport(
        ordered=ordered,
        boundary_ordered=boundary_ordered,
        max_ratio=max_ratio,
        max_ratio_location=location,
        max_ratio_band=band,
        ratios=[float(r) for r in ratios],
        violations=sorted(violations),
    )


def _tangent_edges(mesh: Triangulation, arc: Arc) -> Tuple[Tuple[int, int], ...]:
    face, vertex = arc
    others = [w for w in mesh.faces[face].vertices if w != vertex]
    return tuple(edge_key(vertex, w) for w in others)


def validate_chain(mesh: Triangulation, chain: Sequence[Sequence[int]]) -> Tuple[Arc, ...]:
    """Checks that each arc exists and consecutive arcs meet at a tangent point."""
    arcs = tuple((int(f), int(v)) for f, v in chain)
    if not arcs:
        raise InvalidChainError("A chain needs at least one arc.")
    for face, vertex in arcs:
        if not 0 <= face < mesh.n_faces or vertex not in mesh.faces[face]:
            raise InvalidChainError(f"Arc ({face}, {vertex}) is not a vertex of that face.")
    for a, b in zip(arcs, arcs[1:]):
        if a == b or not set(_tangent_edges(mesh, a)) & set(_tangent_edges(mesh, b)):
            raise InvalidChainError(f"Arcs {a} and {b} do not share a tangent point.")
    return arcs


def arc_neighbors(mesh: Triangulation, arc: Arc) -> List[Arc]:
    """Arcs sharing a tangent point with `arc`: across an edge on the same circle, or the other circle in the face."""
    face, vertex = arc
    out = []
    for edge in _tangent_edges(mesh, arc):
        other = edge[0] if edge[1] == vertex else edge[1]
        out.append((face, other))
        for f in mesh.edge_faces[edge]:
            if f != face:
                out.append((f, vertex))
    return sorted(set(out))


def random_arc_chain(mesh: Triangulation, rng: np.random.Generator, length: int = 3) -> Tuple[Arc, ...]:
    face = int(rng.integers(mesh.n_faces))
    vertex = int(mesh.faces[face].vertices[int(rng.integers(3))])
    chain = [(face, vertex)]
    while len(chain) < length:
        options = [a for a in arc_neighbors(mesh, chain[-1]) if a not in chain]
        if not options:
            break
        chain.append(options[int(rng.integers(len(options)))])
    return tuple(chain)


def _arc_lengths(mesh: Triangulation, result: SolveResult) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    # recomputed from the stored curvatures
    geometry = face_arrays(result.k[mesh.face_array])
    return geometry.l, geometry.area, geometry.k_f


def _slot(mesh: Triangulation, face: int, vertex: int) -> int:
    return mesh.faces[face].vertices.index(vertex)


def schwarz_pick_report(pair: PackingPair, chains: Sequence[Sequence[Sequence[int]]] = ()) -> ComparisonReport:
    """
    Row-by-row comparison under the hypothesis k_hat* <= k_hat: areas and
    sub-arc lengths must not shrink, nor may arc-chain distances.
    """
    mesh = pair.mesh
    if not _boundary_ordered(pair):
        raise HypothesisViolatedError("Boundary curvatures of P* are not all <= those of P.")
    validated = [validate_chain(mesh, c) for c in chains]

    l, area, k_f = _arc_lengths(mesh, pair.P)
    l_star, area_star, k_f_star = _arc_lengths(mesh, pair.P_star)
    k, k_star = pair.P.k, pair.P_star.k
    ratios = k_star / k
    max_ratio, _, location = _max_location(pair, ratios)

    vertex_rows = [
        VertexRow(v, mesh.is_boundary[v], float(k[v]), float(k_star[v]), float(ratios[v]),
                  bool(k_star[v] <= k[v] * (1.0 + ORDER_RTOL)))
        for v in range(mesh.n_vertices)
    ]
    face_rows = [
        FaceRow(f, float(area[f]), float(area_star[f]), float(k_f[f]), float(k_f_star[f]),
                bool(area_star[f] >= area[f] * (1.0 - ORDER_RTOL)))
        for f in range(mesh.n_faces)
    ]
    arc_rows = []
    for f, face in enumerate(mesh.faces):
        for slot, v in enumerate(face.vertices):
            arc_rows.append(ArcRow(f, v, float(l[f, slot]), float(l_star[f, slot]),
                                   bool(l_star[f, slot] >= l[f, slot] * (1.0 - ORDER_RTOL))))
    chain_rows = []
    for chain in validated:
        d = sum(float(l[f, _slot(mesh, f, v)]) for f, v in chain)
        d_star = sum(float(l_star[f, _slot(mesh, f, v)]) for f, v in chain)
        chain_rows.append(ChainRow(chain, d, d_star, bool(d_star >= d * (1.0 - ORDER_RTOL))))

    return ComparisonReport(
        vertices=vertex_rows,
        faces=face_rows,
        arcs=arc_rows,
        chains=chain_rows,
        max_ratio=max_ratio,
        max_ratio_location=location,
    )


def dual_monotonicity_check(pair: PackingPair) -> bool:
    """k_f* <= k_f on every face, given k* <= k on every vertex."""
    if not np.all(pair.P_star.k <= pair.P.k * (1.0 + ORDER_RTOL)):
        raise OrderingNotEstablishedError("k* <= k does not hold on every vertex; run max_principle_check first.")
    _, _, k_f = _arc_lengths(pair.mesh, pair.P)
    _, _, k_f_star = _arc_lengths(pair.mesh, pair.P_star)
    return bool(np.all(k_f_star <= k_f * (1.0 + DUAL_RTOL)))


def compare_packings(pair: PackingPair, chains: Sequence[Sequence[Sequence[int]]] = ()) -> ComparisonOutcome:
    """Runs every check whose hypothesis holds for the pair."""
    max_principle = max_principle_check(pair)
    if not max_principle.boundary_ordered:
        return ComparisonOutcome(max_principle=max_principle, hypothesis_holds=False)
    report = schwarz_pick_report(pair, chains)
    dual = dual_monotonicity_check(pair) if max_principle.ordered else False
    return ComparisonOutcome(
        max_principle=max_principle,
        hypothesis_holds=True,
        schwarz_pick=report,
        dual_monotone=dual,
    )
