import math

import numpy as np
import pytest
from scipy import integrate

from core.errors import DualCurvatureOutOfRangeError, NonPositiveCurvatureError
from core.geometry.circles import (
    CIRCLE,
    HOROCYCLE,
    HYPERCYCLE,
    arc_length,
    arc_length_partials,
    curvature_kind,
    dual_curvature,
    edge_length,
    face_arrays,
    face_geometry,
    polygon_edge_lengths,
    radius,
    total_curvature,
)


def _log_uniform(rng, size, low=0.05, high=20.0):
    return np.exp(rng.uniform(math.log(low), math.log(high), size=size))


def test_curvature_kinds():
    assert curvature_kind(0.5) == HYPERCYCLE
    assert curvature_kind(1.0) == HOROCYCLE
    assert curvature_kind(3.0) == CIRCLE


def test_radius_anchors():
    assert radius(0.5) == pytest.approx(math.atanh(0.5))
    assert radius(2.0) == pytest.approx(math.atanh(0.5))
    assert math.isinf(radius(1.0))
    assert edge_length(2.0, 0.5) == pytest.approx(2 * math.atanh(0.5))


def test_polygon_edges_of_equilateral_face():
    assert polygon_edge_lengths(2.0, 2.0, 2.0) == pytest.approx((math.log(3.0),) * 3)


def test_dual_curvature_examples():
    assert dual_curvature(1, 1, 1) == pytest.approx(2.0)
    assert dual_curvature(2, 2, 2) == pytest.approx(math.sqrt(13.0))


def test_arc_length_branches():
    assert arc_length(1.0, 2.0) == pytest.approx(1.0, abs=1e-15)
    expected = 2.0 / math.sqrt(3.0) * math.atan(math.sqrt(3.0) / math.sqrt(13.0))
    assert arc_length(2.0, math.sqrt(13.0)) == pytest.approx(expected, rel=1e-14)
    assert arc_length(2.0, math.sqrt(13.0)) == pytest.approx(0.51711, abs=1e-5)
    expected = 2.0 / math.sqrt(0.75) * math.atanh(math.sqrt(0.75) / 1.5)
    assert arc_length(0.5, 1.5) == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize("k_v", [1.0 - 1e-6, 1.0 + 1e-6])
def test_series_matches_closed_form_next_to_horocycle(k_v):
    k_f = 1.7
    u = k_v * k_v - 1.0
    if u > 0:
        closed = 2.0 / math.sqrt(u) * math.atan(math.sqrt(u) / k_f)
    else:
        closed = 2.0 / math.sqrt(-u) * math.atanh(math.sqrt(-u) / k_f)
    assert arc_length(k_v, k_f) == pytest.approx(closed, rel=1e-9)
    assert arc_length(k_v, k_f) == pytest.approx(2.0 / k_f, rel=1e-5)


def test_arc_length_is_continuous_across_series_threshold():
    k_f = 2.0
    ks = 1.0 + np.linspace(-3e-4, 3e-4, 601)
    values = np.asarray(arc_length(ks, np.full_like(ks, k_f)))
    jumps = np.abs(np.diff(values))
    assert jumps.max() < 1e-6


def test_partials_match_finite_differences(rng):
    k_v = _log_uniform(rng, 10_000, 1e-3, 1e3)
    others = _log_uniform(rng, (10_000, 2), 1e-3, 1e3)
    k_f = np.sqrt(k_v * others[:, 0] + others[:, 0] * others[:, 1] + k_v * others[:, 1] + 1.0)
    # k_f^2 + k_v^2 - 1, the scale on which l varies with k_f
    gap = (k_v + others[:, 0]) * (k_v + others[:, 1])

    dl_dkv, dl_dkf = arc_length_partials(k_v, k_f)
    h_v = 1e-6 * k_v
    fd_v = (np.asarray(arc_length(k_v + h_v, k_f)) - np.asarray(arc_length(k_v - h_v, k_f))) / (2 * h_v)
    h_f = 1e-5 * gap / (2.0 * k_f)
    fd_f = (np.asarray(arc_length(k_v, k_f + h_f)) - np.asarray(arc_length(k_v, k_f - h_f))) / (2 * h_f)

    np.testing.assert_allclose(dl_dkv, fd_v, rtol=1e-6, atol=1e-8)
    np.testing.assert_allclose(dl_dkf, fd_f, rtol=1e-6)
    np.testing.assert_allclose(dl_dkf, -2.0 / gap, rtol=1e-9)
    np.testing.assert_allclose(dl_dkf, 2.0 / (1.0 - k_v**2 - k_f**2), rtol=1e-8)


@pytest.mark.parametrize("k_v", [0.01, 0.5, 0.999, 1.0, 1.001, 3.0, 40.0])
@pytest.mark.parametrize("k_f", [1.05, 2.0, 25.0])
def test_arc_length_integrates_its_k_f_partial(k_v, k_f):
    # l -> 0 as k_f -> inf like the horocycle value 2 / k_f, so l is the tail integral of -dl/dk_f
    tail, _ = integrate.quad(lambda t: 2.0 / (t * t + k_v * k_v - 1.0), k_f, np.inf, epsabs=0.0, epsrel=1e-12)
    assert arc_length(k_v, k_f) == pytest.approx(tail, rel=1e-9)
    if k_v == 1.0:
        assert tail == pytest.approx(2.0 / k_f, rel=1e-10)


def test_partials_agree_across_horocycle(rng):
    k_f = 1.3
    below, _ = arc_length_partials(1.0 - 1e-6, k_f)
    at, _ = arc_length_partials(1.0, k_f)
    above, _ = arc_length_partials(1.0 + 1e-6, k_f)
    assert below == pytest.approx(at, rel=1e-5)
    assert above == pytest.approx(at, rel=1e-5)


def test_equilateral_horocycle_face():
    face = face_geometry(1.0, 1.0, 1.0)
    assert face.k_f == pytest.approx(2.0)
    assert face.T == pytest.approx((1.0, 1.0, 1.0), abs=1e-12)
    assert face.area == pytest.approx(math.pi - 3.0, abs=1e-12)


def test_face_jacobian_is_symmetric_with_negative_coupling(rng):
    k = _log_uniform(rng, (10_000, 3), 1e-3, 1e3)
    batch = face_arrays(k)
    np.testing.assert_allclose(batch.dT_ds, np.swapaxes(batch.dT_ds, 1, 2), rtol=1e-10, atol=1e-14)

    for v, u in [(0, 1), (1, 2), (0, 2)]:
        expected = -k[:, u] * k[:, v] / (batch.k_f * (k[:, u] + k[:, v]))
        np.testing.assert_allclose(batch.dT_ds[:, v, u], expected, rtol=1e-10)
    assert np.all(np.diagonal(batch.dT_ds, axis1=1, axis2=2) > 0)


def test_face_jacobian_matches_finite_differences(rng):
    k = _log_uniform(rng, (50, 3))
    batch = face_arrays(k)
    h = 1e-6
    for u in range(3):
        up, down = k.copy(), k.copy()
        up[:, u] *= math.exp(h)
        down[:, u] *= math.exp(-h)
        fd = (face_arrays(up).T - face_arrays(down).T) / (2 * h)
        np.testing.assert_allclose(batch.dT_ds[:, :, u], fd, rtol=1e-6, atol=1e-9)


def test_total_curvature_limits():
    others = (1.0, 1.0)
    assert total_curvature(1e-8, dual_curvature(1e-8, *others)) < 1e-6

    # T_r -> pi only like k_r^(-1/2)
    gaps = [math.pi - total_curvature(k, dual_curvature(k, *others)) for k in (1e4, 1e6, 1e8)]
    assert gaps[0] > gaps[1] > gaps[2] > 0
    assert gaps[2] < 1e-3

    big = face_geometry(1e8, 1e8, 1e8)
    assert sum(big.T) > math.pi - 1e-6


def test_face_totals_stay_in_open_range(rng):
    k = _log_uniform(rng, (10_000, 3), 1e-12, 1e3)
    batch = face_arrays(k)
    assert np.all(np.isfinite(batch.T)) and np.all(np.isfinite(batch.dT_ds))
    assert np.all(batch.T > 0)
    assert np.all(batch.T.sum(axis=1) < math.pi)
    assert np.all(batch.area > 0)

    diagonal = np.diagonal(batch.dT_ds, axis1=1, axis2=2)
    assert np.all(diagonal > 0)
    for v, u in [(0, 1), (1, 2), (0, 2)]:
        expected = -k[:, u] * k[:, v] / (batch.k_f * (k[:, u] + k[:, v]))
        assert np.all(batch.dT_ds[:, v, u] < 0)
        np.testing.assert_allclose(batch.dT_ds[:, v, u], expected, rtol=1e-10)
        np.testing.assert_allclose(batch.dT_ds[:, u, v], expected, rtol=1e-10)
    assert np.all(batch.dT_ds.sum(axis=1) > 0)


@pytest.mark.parametrize("k", [1e-6, 1e-8, 1e-10, 1e-12])
def test_small_curvatures_keep_precision(k):
    face = face_geometry(k, k, k)
    # each sub-arc spans about -2 ln k of the nearly geodesic boundary
    assert face.T == pytest.approx((-2.0 * k * math.log(k),) * 3, rel=1e-9)
    assert 0.0 < face.area < math.pi


def test_face_quantities_follow_vertex_order(rng):
    k = _log_uniform(rng, (200, 3), 1e-6, 1e3)
    batch = face_arrays(k)
    for order in [(1, 2, 0), (2, 0, 1), (1, 0, 2), (0, 2, 1)]:
        permuted = face_arrays(k[:, order])
        np.testing.assert_allclose(permuted.k_f, batch.k_f, rtol=1e-13)
        np.testing.assert_allclose(permuted.T, batch.T[:, order], rtol=1e-13)
        np.testing.assert_allclose(permuted.area, batch.area, rtol=1e-13)
        np.testing.assert_allclose(
            permuted.dT_ds, batch.dT_ds[:, order][:, :, order], rtol=1e-12, atol=1e-300
        )


def test_invalid_curvatures_rejected():
    with pytest.raises(NonPositiveCurvatureError):
        dual_curvature(0.0, 1.0, 1.0)
    with pytest.raises(NonPositiveCurvatureError):
        radius(-2.0)
    with pytest.raises(NonPositiveCurvatureError):
        face_arrays(np.array([[1.0, np.inf, 1.0]]))
    with pytest.raises(DualCurvatureOutOfRangeError):
        arc_length(2.0, 0.5)
