"""Mean value coordinates on simple polygons, their analytic gradients, and
Wachspress coordinates on convex polygons as a smooth comparison baseline.

For an interior point x of a polygon with vertices p_i (anticlockwise),
the mean value weights are

    w_i = (t_{i-1} + t_i) / r_i,      phi_i = w_i / sum_j w_j,

where r_i = |p_i - x| and t_i is the tangent of half the signed angle
between the unit directions e_i and e_{i+1} towards consecutive vertices.
The half-angle tangents are evaluated from dot and cross products alone,
without trigonometric calls.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    BoundaryPointError,
    ExteriorPointError,
    NonConvexCageError,
    SingularAngleError,
)
from .geometry import (
    Polygon,
    as_point,
    corner_areas,
    is_convex,
    locate,
    perp,
    signed_area,
)

# Below this value of 1 + dot the angle is treated as +-pi: the evaluation
# point sits on the open edge between the two directions and must be routed
# through the boundary formulas by the caller.
SINGULAR_ANGLE_THRESHOLD = 1e-14


def half_tangent(dot: float, crs: float) -> float:
    """tan(alpha/2) for the angle alpha with cos alpha = dot, sin alpha = crs.

    Uses crs / (1 + dot) when |1 + dot| >= |crs| and (1 - dot) / crs
    otherwise, so each branch is evaluated only where it is well
    conditioned.  The result has the sign of crs.

    Raises SingularAngleError when 1 + dot <= 1e-14 (alpha at +-pi).
    """
    one_plus = 1.0 + dot
    if one_plus <= SINGULAR_ANGLE_THRESHOLD:
        raise SingularAngleError(
            f"half-angle tangent undefined for near-opposite directions "
            f"(1 + dot = {one_plus:.3e})"
        )
    if abs(one_plus) >= abs(crs):
        return crs / one_plus
    return (1.0 - dot) / crs


def _half_tangent_arrays(dot: np.ndarray, crs: np.ndarray, on_singular: str):
    """Vectorized half_tangent.  on_singular is "raise" or "nan"."""
    one_plus = 1.0 + dot
    singular = one_plus <= SINGULAR_ANGLE_THRESHOLD
    if np.any(singular):
        if on_singular == "raise":
            raise SingularAngleError(
                f"{int(np.count_nonzero(singular))} angle(s) at +-pi; "
                "evaluation point(s) lie on an edge"
            )
    t = np.empty_like(dot)
    use_ratio = np.abs(one_plus) >= np.abs(crs)
    t[use_ratio] = crs[use_ratio] / one_plus[use_ratio]
    other = ~use_ratio
    t[other] = (1.0 - dot[other]) / crs[other]
    if np.any(singular):
        t[singular] = np.nan
    return t


@dataclass(frozen=True)
class LocalFrame:
    """All per-point quantities entering the mean value formulas.

    Arrays are indexed by vertex (length n, cyclic): dist r_i, unit
    directions e_i, dot/cross of consecutive directions, half-angle
    tangents t_i, gradient coefficients u_i = (1/r_i + 1/r_{i+1})(1 + t_i^2),
    weights w_i and their sum.
    """

    point: np.ndarray
    vertices: np.ndarray
    dist: np.ndarray
    unit: np.ndarray
    dot: np.ndarray
    cross: np.ndarray
    half_tan: np.ndarray
    grad_coeff: np.ndarray
    weights: np.ndarray
    weight_sum: float

    @property
    def n(self) -> int:
        return len(self.dist)


@dataclass(frozen=True)
class CoordinateSet:
    """Barycentric coordinate values phi_i at one point."""

    phi: np.ndarray


@dataclass(frozen=True)
class GradientSet:
    """Weight gradients (n, 2) and coordinate gradients (n, 2) at one point."""

    grad_w: np.ndarray
    grad_phi: np.ndarray


def _frame_arrays(vertices: np.ndarray, pts: np.ndarray, on_singular: str = "raise"):
    """Mean value frame quantities for a batch of strictly interior points.

    Returns a dict of arrays shaped (m, n[, 2]).  With on_singular="nan",
    points that hit an edge line produce NaN rows instead of raising.
    """
    diff = vertices[None, :, :] - pts[:, None, :]
    r = np.hypot(diff[..., 0], diff[..., 1])
    if np.any(r == 0.0):
        raise BoundaryPointError("evaluation point coincides with a vertex")
    e = diff / r[..., None]
    e_next = np.roll(e, -1, axis=1)
    dots = np.einsum("mni,mni->mn", e, e_next)
    crs = e[..., 0] * e_next[..., 1] - e[..., 1] * e_next[..., 0]
    t = _half_tangent_arrays(dots, crs, on_singular)
    w = (np.roll(t, 1, axis=1) + t) / r
    u = (1.0 / r + 1.0 / np.roll(r, -1, axis=1)) * (1.0 + t * t)
    return {
        "dist": r,
        "unit": e,
        "dot": dots,
        "cross": crs,
        "half_tan": t,
        "grad_coeff": u,
        "weights": w,
        "weight_sum": np.sum(w, axis=1),
    }


def _weight_gradient_arrays(frame: dict) -> np.ndarray:
    """Analytic weight gradients, (m, n, 2):
    grad w_i = (u_{i-1} perp(e_{i-1}) - u_i perp(e_{i+1})) / (2 r_i)."""
    ep = perp(frame["unit"])
    u = frame["grad_coeff"]
    num = (
        np.roll(u, 1, axis=1)[..., None] * np.roll(ep, 1, axis=1)
        - u[..., None] * np.roll(ep, -1, axis=1)
    )
    return num / (2.0 * frame["dist"][..., None])


def _phi_arrays(frame: dict) -> np.ndarray:
    return frame["weights"] / frame["weight_sum"][:, None]


def _phi_gradient_arrays(frame: dict):
    """(phi, grad_phi) arrays, shapes (m, n) and (m, n, 2)."""
    w = frame["weights"]
    W = frame["weight_sum"]
    grad_w = _weight_gradient_arrays(frame)
    grad_W = grad_w.sum(axis=1)
    phi = w / W[:, None]
    grad_phi = (
        grad_w / W[:, None, None]
        - (w / (W * W)[:, None])[..., None] * grad_W[:, None, :]
    )
    return phi, grad_phi


def local_frame(poly: Polygon, x, tol: float | None = None) -> LocalFrame:
    """Frame of mean value quantities at a strictly interior point."""
    x = as_point(x)
    loc = locate(poly, x, tol)
    if loc.is_exterior:
        raise ExteriorPointError(f"point {x.tolist()} lies outside the polygon")
    if loc.on_boundary:
        raise BoundaryPointError(
            f"point {x.tolist()} lies on the boundary; the interior frame is undefined there"
        )
    fr = _frame_arrays(poly.vertices, x[None, :])
    return LocalFrame(
        point=x,
        vertices=poly.vertices,
        dist=fr["dist"][0],
        unit=fr["unit"][0],
        dot=fr["dot"][0],
        cross=fr["cross"][0],
        half_tan=fr["half_tan"][0],
        grad_coeff=fr["grad_coeff"][0],
        weights=fr["weights"][0],
        weight_sum=float(fr["weight_sum"][0]),
    )


def boundary_coordinates(n: int, loc) -> np.ndarray:
    """Coordinates at a boundary location: one-hot at a vertex, linear
    interpolation of the two edge endpoints on an open edge."""
    phi = np.zeros(n)
    if loc.kind == "vertex":
        phi[loc.index] = 1.0
    elif loc.kind == "edge":
        phi[loc.index] = 1.0 - loc.param
        phi[(loc.index + 1) % n] = loc.param
    else:
        raise ValueError(f"not a boundary location: {loc}")
    return phi


def mv_coordinates(poly: Polygon, x, tol: float | None = None) -> CoordinateSet:
    """Mean value coordinates of a point in the closure of the polygon.

    Interior points use the weight formula; boundary points use the exact
    piecewise-linear edge values.  Exterior points are rejected.
    """
    x = as_point(x)
    loc = locate(poly, x, tol)
    if loc.is_exterior:
        raise ExteriorPointError(f"point {x.tolist()} lies outside the polygon")
    if loc.on_boundary:
        return CoordinateSet(phi=boundary_coordinates(poly.n, loc))
    fr = _frame_arrays(poly.vertices, x[None, :])
    return CoordinateSet(phi=_phi_arrays(fr)[0])


def _frame_dict(frame: LocalFrame) -> dict:
    return {
        "dist": frame.dist[None, :],
        "unit": frame.unit[None, :, :],
        "half_tan": frame.half_tan[None, :],
        "grad_coeff": frame.grad_coeff[None, :],
        "weights": frame.weights[None, :],
        "weight_sum": np.array([frame.weight_sum]),
    }


def mv_weight_gradients(frame: LocalFrame) -> np.ndarray:
    """Analytic gradients of the unnormalized weights, shape (n, 2)."""
    return _weight_gradient_arrays(_frame_dict(frame))[0]


def mv_coordinate_gradients(frame: LocalFrame) -> GradientSet:
    """Analytic gradients of weights and coordinates via the quotient rule."""
    fd = _frame_dict(frame)
    grad_w = _weight_gradient_arrays(fd)[0]
    _, grad_phi = _phi_gradient_arrays(fd)
    return GradientSet(grad_w=grad_w, grad_phi=grad_phi[0])


def _wachspress_weight_arrays(poly: Polygon, x: np.ndarray):
    v = poly.vertices
    corner = corner_areas(poly)
    edge_area = signed_area(v, np.roll(v, -1, axis=0), x[None, :])
    if np.any(edge_area <= 0.0):
        raise BoundaryPointError(
            "Wachspress coordinates need a strictly interior point of a convex polygon"
        )
    w = corner / (np.roll(edge_area, 1) * edge_area)
    return w, edge_area


def wachspress_coordinates(poly: Polygon, x) -> CoordinateSet:
    """Wachspress coordinates of a strictly interior point of a convex
    polygon: w_i = A(p_{i-1}, p_i, p_{i+1}) / (A_{i-1}(x) A_i(x)),
    normalized, with A_i(x) the area of (p_i, p_{i+1}, x)."""
    x = as_point(x)
    if not is_convex(poly):
        raise NonConvexCageError("Wachspress coordinates require a convex polygon")
    loc = locate(poly, x)
    if loc.is_exterior:
        raise ExteriorPointError(f"point {x.tolist()} lies outside the polygon")
    if loc.on_boundary:
        raise BoundaryPointError("Wachspress coordinates evaluated on the boundary")
    w, _ = _wachspress_weight_arrays(poly, x)
    return CoordinateSet(phi=w / np.sum(w))


def _wachspress_phi_arrays(poly: Polygon, pts: np.ndarray) -> np.ndarray:
    """Batch Wachspress coordinates for strictly interior points, (m, n)."""
    v = poly.vertices
    corner = corner_areas(poly)
    a = v[None, :, :]
    b = np.roll(v, -1, axis=0)[None, :, :]
    x = pts[:, None, :]
    edge_area = 0.5 * (
        (b[..., 0] - a[..., 0]) * (x[..., 1] - b[..., 1])
        - (b[..., 1] - a[..., 1]) * (x[..., 0] - b[..., 0])
    )
    if np.any(edge_area <= 0.0):
        raise BoundaryPointError(
            "Wachspress coordinates need strictly interior points of a convex polygon"
        )
    w = corner[None, :] / (np.roll(edge_area, 1, axis=1) * edge_area)
    return w / np.sum(w, axis=1)[:, None]


def wachspress_gradients(poly: Polygon, x) -> GradientSet:
    """Analytic Wachspress weight and coordinate gradients at an interior
    point of a convex polygon.  Each edge area A_i(x) is affine in x with
    constant gradient perp(p_{i+1} - p_i) / 2, so

        grad w_i = -w_i (grad A_{i-1} / A_{i-1} + grad A_i / A_i).
    """
    x = as_point(x)
    if not is_convex(poly):
        raise NonConvexCageError("Wachspress gradients require a convex polygon")
    w, edge_area = _wachspress_weight_arrays(poly, x)
    v = poly.vertices
    grad_area = perp(np.roll(v, -1, axis=0) - v) * 0.5      # (n, 2)
    ratio = grad_area / edge_area[:, None]
    grad_w = -w[:, None] * (np.roll(ratio, 1, axis=0) + ratio)
    W = np.sum(w)
    grad_W = grad_w.sum(axis=0)
    grad_phi = grad_w / W - np.outer(w / (W * W), grad_W)
    return GradientSet(grad_w=grad_w, grad_phi=grad_phi)
