"""
Places the generalized circle packing of a single face in the Poincare disk.

The dual circle is centered at the origin. Tangent point j sits between
circle j and circle j+1 (mod 3), so circle v spans the dual-circle arc from
tangent point v-1 to tangent point v. Rotation is fixed by putting tangent
point 0 at angle 0.
"""
import math
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np
from scipy import integrate

from ..errors import LayoutNotConvergedError
from ..geometry.circles import curvature_kind, dual_curvature, radius

DUAL = "dual"
LAYOUT_TOL = 1e-9
LAYOUT_MAX_ITER = 200
QUAD_EPSABS = 1e-10


@dataclass(frozen=True)
class DiskCircle:
    center: Tuple[float, float]
    radius: float
    kind: str

    @property
    def geodesic_curvature(self) -> float:
        """k = (1 - |c|^2 + rho^2) / (2 rho), measured toward the dual circle's center."""
        cx, cy = self.center
        return (1.0 - (cx * cx + cy * cy) + self.radius**2) / (2.0 * self.radius)


@dataclass(frozen=True)
class FaceLayout:
    curvatures: Tuple[float, float, float]
    dual: DiskCircle
    circles: Tuple[DiskCircle, DiskCircle, DiskCircle]
    tangent_points: Tuple[Tuple[float, float], ...]
    tangent_angles: Tuple[float, float, float]
    iterations: int
    residual: float

    def arc_span(self, slot: int) -> Tuple[float, float]:
        """Polar angles (start, end) of the dual-circle arc cut off by circle `slot`; end > start."""
        start = self.tangent_angles[(slot - 1) % 3]
        end = self.tangent_angles[slot]
        if end <= start:
            end += 2.0 * math.pi
        return start, end

    def tangency_residuals(self) -> List[float]:
        """|distance between centers - (rho_a + rho_b)| and tangent-point incidence for each touching pair."""
        out = []
        for j in range(3):
            a, b = self.circles[j], self.circles[(j + 1) % 3]
            gap = math.dist(a.center, b.center) - (a.radius + b.radius)
            p = self.tangent_points[j]
            on_a = math.dist(p, a.center) - a.radius
            on_b = math.dist(p, b.center) - b.radius
            out.append(max(abs(gap), abs(on_a), abs(on_b)))
        return out

    def orthogonality_residuals(self) -> List[float]:
        rd = self.dual.radius
        return [abs(c.center[0] ** 2 + c.center[1] ** 2 - (c.radius**2 + rd**2)) for c in self.circles]


def dual_disk_radius(k_f: float) -> float:
    """Euclidean radius tanh(r_f / 2) of the origin-centered dual circle."""
    return math.tanh(float(radius(k_f)) / 2.0)


def _log_curvature_from_span(span: np.ndarray, scale: float) -> np.ndarray:
    # circle through two points of the dual circle, orthogonal to it: rho = R tan(span / 2)
    return math.log(scale) - np.log(np.tan(span / 2.0))


def _spans(angles: np.ndarray) -> np.ndarray:
    theta2, theta3 = angles
    return np.array([2.0 * math.pi - theta3, theta2, theta3 - theta2])


def layout_face(k1: float, k2: float, k3: float) -> FaceLayout:
    """
    Solves for the tangent-point angles by damped Gauss-Newton on the
    log-curvature residuals of the three circles, starting from equal arcs.
    """
    k = np.array([k1, k2, k3], dtype=float)
    k_f = float(dual_curvature(k1, k2, k3))
    big_r = dual_disk_radius(k_f)
    scale = (1.0 - big_r**2) / (2.0 * big_r)
    log_k = np.log(k)

    # d(span)/d(theta2, theta3) for spans of circles 0, 1, 2
    span_jacobian = np.array([[0.0, -1.0], [1.0, 0.0], [-1.0, 1.0]])

    def residual(angles: np.ndarray) -> np.ndarray:
        return _log_curvature_from_span(_spans(angles), scale) - log_k

    angles = np.array([2.0 * math.pi / 3.0, 4.0 * math.pi / 3.0])
    r = residual(angles)
    iterations = 0
    while np.max(np.abs(r)) > 1e-14 and iterations < LAYOUT_MAX_ITER:
        iterations += 1
        spans = _spans(angles)
        jac = (-1.0 / np.sin(spans))[:, None] * span_jacobian
        step, *_ = np.linalg.lstsq(jac, -r, rcond=None)
        alpha = 1.0
        norm = np.linalg.norm(r)
        while alpha > 1e-12:
            trial = angles + alpha * step
            trial_spans = _spans(trial)
            if np.all(trial_spans > 0) and np.all(trial_spans < math.pi):
                trial_r = residual(trial)
                if np.linalg.norm(trial_r) < norm:
                    break
            alpha *= 0.5
        else:
            break
        angles, r = trial, trial_r

    worst = float(np.max(np.abs(np.expm1(r))))
    if worst > LAYOUT_TOL:
        raise LayoutNotConvergedError(
            f"Layout of face ({k1}, {k2}, {k3}) stalled with relative curvature residual {worst:.3e} "
            f"after {iterations} iterations."
        )

    tangent_angles = (0.0, float(angles[0]), float(angles[1]))
    tangent_points = tuple((big_r * math.cos(t), big_r * math.sin(t)) for t in tangent_angles)

    circles = []
    spans = _spans(angles)
    for slot in range(3):
        start = tangent_angles[(slot - 1) % 3]
        half = spans[slot] / 2.0
        middle = start + half
        center_dist = big_r / math.cos(half)
        circles.append(DiskCircle(
            center=(center_dist * math.cos(middle), center_dist * math.sin(middle)),
            radius=big_r * math.tan(half),
            kind=curvature_kind(float(k[slot])),
        ))

    return FaceLayout(
        curvatures=(float(k1), float(k2), float(k3)),
        dual=DiskCircle(center=(0.0, 0.0), radius=big_r, kind=DUAL),
        circles=tuple(circles),  # type: ignore[arg-type]
        tangent_points=tangent_points,
        tangent_angles=tangent_angles,  # type: ignore[arg-type]
        iterations=iterations,
        residual=worst,
    )


def _subarc_parameter_range(layout: FaceLayout, slot: int) -> Tuple[float, float]:
    """Range of the angle about the circle's own center covering the arc inside the dual disk."""
    circle = layout.circles[slot]
    cx, cy = circle.center
    toward_origin = math.atan2(-cy, -cx)
    half = math.atan2(layout.dual.radius, circle.radius)
    return toward_origin - half, toward_origin + half


def measure_subarc(layout: FaceLayout, vertex_slot: int) -> float:
    """Hyperbolic length of circle `vertex_slot` between its two tangent points, by quadrature."""
    circle = layout.circles[vertex_slot]
    cx, cy = circle.center
    rho = circle.radius
    lo, hi = _subarc_parameter_range(layout, vertex_slot)

    def speed(psi: float) -> float:
        x = cx + rho * math.cos(psi)
        y = cy + rho * math.sin(psi)
        return 2.0 * rho / (1.0 - x * x - y * y)

    value, _ = integrate.quad(speed, lo, hi, epsabs=QUAD_EPSABS, epsrel=1e-13, limit=200)
    return value


def dual_circumference(layout: FaceLayout) -> float:
    """Hyperbolic circumference of the dual circle, by quadrature of the disk metric."""
    rd = layout.dual.radius
    value, _ = integrate.quad(lambda t: 2.0 * rd / (1.0 - rd * rd), 0.0, 2.0 * math.pi, epsabs=QUAD_EPSABS)
    return value


def region_area(layout: FaceLayout) -> float:
    """
    Hyperbolic area of the region bounded by the three sub-arcs.

    Uses Green's theorem with the 1-form F(r) dtheta, F(r) = 2 r^2 / (1 - r^2),
    whose exterior derivative is the disk area form 4 / (1 - r^2)^2 dx dy.
    The boundary is walked clockwise about each circle's own center.
    """
    total = 0.0
    for slot, circle in enumerate(layout.circles):
        cx, cy = circle.center
        rho = circle.radius
        lo, hi = _subarc_parameter_range(layout, slot)

        def integrand(psi: float) -> float:
            x = cx + rho * math.cos(psi)
            y = cy + rho * math.sin(psi)
            dx = -rho * math.sin(psi)
            dy = rho * math.cos(psi)
            r2 = x * x + y * y
            return -(2.0 / (1.0 - r2)) * (x * dy - y * dx)

        value, _ = integrate.quad(integrand, lo, hi, epsabs=1e-12, epsrel=1e-13, limit=200)
        total += value
    return total
