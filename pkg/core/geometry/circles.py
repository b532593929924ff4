"""
Closed-form kernel for generalized circles (hypercycle k<1, horocycle k=1,
circle k>1) packed on a single triangle.

Every function accepts scalars or numpy arrays; scalar inputs give floats back.
All sub-arc quantities depend on a vertex curvature k_v and the curvature k_f
of the face's dual circle.
"""
from typing import Optional, Tuple, Union

import numpy as np

from ..errors import DualCurvatureOutOfRangeError, NonPositiveCurvatureError
from .geometry_types import FaceGeometry, FaceGeometryBatch

ArrayLike = Union[float, np.ndarray]

# |k_v^2 - 1| / k_f^2 below this uses the power series around the horocycle.
SERIES_THRESHOLD = 1e-4
SERIES_RTOL = 1e-17
SERIES_MAX_TERMS = 60

HYPERCYCLE = "hypercycle"
HOROCYCLE = "horocycle"
CIRCLE = "circle"


def _as_result(values: np.ndarray) -> ArrayLike:
    return float(values) if np.ndim(values) == 0 else values


def _curvatures(*values: ArrayLike) -> Tuple[np.ndarray, ...]:
    arrays = tuple(np.asarray(v, dtype=float) for v in values)
    for k in arrays:
        if not np.all(np.isfinite(k)) or np.any(k <= 0):
            raise NonPositiveCurvatureError(f"Geodesic curvatures must be positive and finite, got {k}.")
    return arrays


def curvature_kind(k: float) -> str:
    (k_arr,) = _curvatures(k)
    value = float(k_arr)
    if value < 1:
        return HYPERCYCLE
    if value > 1:
        return CIRCLE
    return HOROCYCLE


def radius(k: ArrayLike) -> ArrayLike:
    """r(k): arctanh k for hypercycles, +inf for horocycles, arccoth k for circles."""
    (k,) = _curvatures(k)
    hyper = np.arctanh(np.where(k < 1, k, 0.5))
    circle = np.arctanh(1.0 / np.where(k > 1, k, 2.0))
    return _as_result(np.where(k < 1, hyper, np.where(k > 1, circle, np.inf)))


def edge_length(k_i: ArrayLike, k_j: ArrayLike) -> ArrayLike:
    """Length of the geodesic joining the centers of two tangent generalized circles."""
    return _as_result(np.asarray(radius(k_i)) + np.asarray(radius(k_j)))


def dual_curvature(k1: ArrayLike, k2: ArrayLike, k3: ArrayLike) -> ArrayLike:
    """k_f^2 = k1 k2 + k2 k3 + k1 k3 + 1."""
    k1, k2, k3 = _curvatures(k1, k2, k3)
    return _as_result(np.sqrt(k1 * k2 + k2 * k3 + k1 * k3 + 1.0))


def _odd_reciprocal_series(x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """S(x) = sum x^n / (2n+1) and S'(x), for |x| small."""
    total = np.ones_like(x)
    derivative = np.zeros_like(x)
    power = np.ones_like(x)  # x ** (n - 1)
    for n in range(1, SERIES_MAX_TERMS):
        d_term = n * power / (2 * n + 1)
        power = power * x
        term = power / (2 * n + 1)
        total = total + term
        derivative = derivative + d_term
        if (np.all(np.abs(term) <= SERIES_RTOL * np.abs(total))
                and np.all(np.abs(d_term) <= SERIES_RTOL * np.maximum(np.abs(derivative), 1e-300))):
            break
    return total, derivative


def _arc_terms(
    k_v: np.ndarray,
    k_f: np.ndarray,
    gap: Optional[np.ndarray] = None,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Returns (l, dl/dk_v, dl/dk_f) with k_v, k_f already validated and broadcast.

    `gap` is k_f^2 + k_v^2 - 1. Inside a face it equals (k_v + k_u)(k_v + k_w)
    exactly, which callers pass in so small curvatures keep their digits.
    """
    u = (k_v - 1.0) * (k_v + 1.0)
    kf2 = k_f * k_f
    if gap is None:
        gap = (k_f - 1.0) * (k_f + 1.0) + k_v * k_v
    x = -u / kf2
    use_series = np.abs(x) < SERIES_THRESHOLD
    is_circle = ~use_series & (u > 0)
    is_hyper = ~use_series & (u < 0)

    total, d_total = _odd_reciprocal_series(np.where(use_series, x, 0.0))
    l_series = 2.0 / k_f * total
    dl_series = 2.0 / k_f * d_total * (-2.0 * k_v / kf2)

    a = np.sqrt(np.where(is_circle, u, 1.0))
    atan = np.arctan(a / k_f)
    l_circle = 2.0 * atan / a
    dl_circle = 2.0 * k_v / a**3 * (k_f * a / gap - atan)

    # arctanh(b / k_f) = 0.5 log1p(2b / (k_f - b)) with k_f - b = gap / (k_f + b)
    b = np.sqrt(np.where(is_hyper, -u, 0.25))
    atanh = 0.5 * np.log1p(2.0 * b * (k_f + b) / gap)
    l_hyper = 2.0 * atanh / b
    dl_hyper = -2.0 * k_v / b**3 * (k_f * b / gap - atanh)

    l = np.where(use_series, l_series, np.where(is_circle, l_circle, l_hyper))
    dl_dkv = np.where(use_series, dl_series, np.where(is_circle, dl_circle, dl_hyper))
    dl_dkf = -2.0 / gap
    return l, dl_dkv, dl_dkf


def _checked_pair(k_v: ArrayLike, k_f: ArrayLike) -> Tuple[np.ndarray, np.ndarray]:
    (k_v,) = _curvatures(k_v)
    k_f = np.asarray(k_f, dtype=float)
    if not np.all(np.isfinite(k_f)) or np.any(k_f <= 1.0) or np.any(k_f * k_f <= 1.0 - k_v * k_v):
        raise DualCurvatureOutOfRangeError(
            f"Dual curvature must exceed max(1, sqrt(1 - k_v^2)); got k_f={k_f} for k_v={k_v}."
        )
    return np.broadcast_arrays(k_v, k_f)


def arc_length(k_v: ArrayLike, k_f: ArrayLike) -> ArrayLike:
    """
    Hyperbolic length l_v^f of the sub-arc of C_v inside the dual circle C_f.

        k_v > 1: (2 / sqrt(k_v^2 - 1)) * arctan(sqrt(k_v^2 - 1) / k_f)
        k_v = 1: 2 / k_f
        k_v < 1: (2 / sqrt(1 - k_v^2)) * arctanh(sqrt(1 - k_v^2) / k_f)

    Near k_v = 1 the three branches are replaced by their common power series
    in u = k_v^2 - 1.
    """
    k_v, k_f = _checked_pair(k_v, k_f)
    l, _, _ = _arc_terms(k_v, k_f)
    return _as_result(l)


def arc_length_partials(k_v: ArrayLike, k_f: ArrayLike) -> Tuple[ArrayLike, ArrayLike]:
    """(dl/dk_v, dl/dk_f) of arc_length."""
    k_v, k_f = _checked_pair(k_v, k_f)
    _, dl_dkv, dl_dkf = _arc_terms(k_v, k_f)
    return _as_result(dl_dkv), _as_result(dl_dkf)


def total_curvature(k_v: ArrayLike, k_f: ArrayLike) -> ArrayLike:
    """T_v^f = k_v * l_v^f."""
    k_v, k_f = _checked_pair(k_v, k_f)
    l, _, _ = _arc_terms(k_v, k_f)
    return _as_result(k_v * l)


def face_arrays(k: np.ndarray) -> FaceGeometryBatch:
    """
    Evaluates every face of a (F, 3) curvature array in one pass.

    dT_ds[f, v, u] = k_u * (delta_uv * (l_v + k_v dl_v/dk_v) + k_v dl_v/dk_f * dk_f/dk_u)
    with dk_f/dk_u = (sum of the other two curvatures) / (2 k_f).
    """
    (k,) = _curvatures(np.asarray(k, dtype=float).reshape(-1, 3))
    k_f = np.sqrt(k[:, 0] * k[:, 1] + k[:, 1] * k[:, 2] + k[:, 0] * k[:, 2] + 1.0)
    kf = k_f[:, None]
    # k_f^2 + k_v^2 - 1 = (k_v + k_u)(k_v + k_w), free of cancellation for small k
    gap = (k + k[:, [1, 2, 0]]) * (k + k[:, [2, 0, 1]])
    l, dl_dkv, dl_dkf = _arc_terms(k, np.broadcast_to(kf, k.shape), gap)
    T = k * l
    area = np.pi - T.sum(axis=1)

    dkf_dk = (k.sum(axis=1, keepdims=True) - k) / (2.0 * kf)
    coupling = (k * dl_dkf)[:, :, None] * (k * dkf_dk)[:, None, :]
    direct = k * (l + k * dl_dkv)
    dT_ds = coupling.copy()
    idx = np.arange(3)
    dT_ds[:, idx, idx] += direct
    return FaceGeometryBatch(k=k, k_f=k_f, l=l, T=T, area=area, dT_ds=dT_ds)


def face_geometry(k1: float, k2: float, k3: float) -> FaceGeometry:
    """Derived quantities of the generalized circle packing of one triangle."""
    return face_arrays(np.array([[k1, k2, k3]], dtype=float)).face(0)


def polygon_edge_lengths(k1: float, k2: float, k3: float) -> Tuple[float, float, float]:
    """Side lengths (l_12, l_23, l_13) of the polygon joining the three centers."""
    return (
        float(edge_length(k1, k2)),
        float(edge_length(k2, k3)),
        float(edge_length(k1, k3)),
    )
