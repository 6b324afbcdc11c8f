"""Jacobian machinery for barycentric mappings between polygons with equal
vertex counts: the coordinate-triple determinant, its quadrilateral closed
form, boundary values on open edges, and the corner-area ratio at vertices.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import coordinates
from .coordinates import LocalFrame, half_tangent, local_frame
from .errors import DegenerateCornerError, EdgeParameterError
from .geometry import Location, Polygon, as_point, corner_areas, signed_area


@dataclass(frozen=True)
class MappingPair:
    """Source and target cages of a barycentric mapping."""

    source: Polygon
    target: Polygon

    def __post_init__(self):
        if self.source.n != self.target.n:
            raise ValueError(
                f"source and target must have equal vertex counts "
                f"({self.source.n} != {self.target.n})"
            )

    @property
    def n(self) -> int:
        return self.source.n


def det3(values, gradients) -> float:
    """Determinant of the 3x3 matrix whose first row holds three function
    values and whose remaining rows hold their x- and y-partials."""
    a, b, c = (float(t) for t in np.asarray(values, dtype=float))
    ga, gb, gc = np.asarray(gradients, dtype=float)
    return (
        a * (gb[0] * gc[1] - gb[1] * gc[0])
        - b * (ga[0] * gc[1] - ga[1] * gc[0])
        + c * (ga[0] * gb[1] - ga[1] * gb[0])
    )


def _coords_and_gradients(pair: MappingPair, x, kind: str):
    if kind == "mv":
        frame = local_frame(pair.source, x)
        phi = frame.weights / frame.weight_sum
        grad_phi = coordinates.mv_coordinate_gradients(frame).grad_phi
    elif kind == "wachspress":
        phi = coordinates.wachspress_coordinates(pair.source, x).phi
        grad_phi = coordinates.wachspress_gradients(pair.source, x).grad_phi
    else:
        raise ValueError(f"unknown coordinate kind {kind!r}")
    return phi, grad_phi


def jacobian_via_triples(pair: MappingPair, x, kind: str = "mv") -> float:
    """Mapping Jacobian at an interior point, assembled as twice the sum of
    coordinate-triple determinants weighted by target triangle areas."""
    x = as_point(x)
    phi, grad_phi = _coords_and_gradients(pair, x, kind)
    q = pair.target.vertices
    total = 0.0
    for i, j, k in combinations(range(pair.n), 3):
        d = det3((phi[i], phi[j], phi[k]), (grad_phi[i], grad_phi[j], grad_phi[k]))
        total += d * signed_area(q[i], q[j], q[k])
    return 2.0 * total


@dataclass(frozen=True)
class QuadDeterminants:
    """The four consecutive coordinate-triple determinants of a quad
    (entry i pairs coordinates i-1, i, i+1 cyclically), tagged with the
    location they were evaluated at."""

    values: np.ndarray
    location: Location


def _quad_interior_determinant_arrays(frame: dict) -> np.ndarray:
    """Closed-form determinants for a batch of interior quad frames, (m, 4):

        D_i = ((t_{i-2} + t_{i-1}) u_i + (t_i + t_{i+1}) u_{i-1})
              / (2 W^2 r_{i-1} r_i r_{i+1})
    """
    t = frame["half_tan"]
    u = frame["grad_coeff"]
    r = frame["dist"]
    W = frame["weight_sum"]
    num = (np.roll(t, 2, axis=1) + np.roll(t, 1, axis=1)) * u + (
        t + np.roll(t, -1, axis=1)
    ) * np.roll(u, 1, axis=1)
    den = 2.0 * (W * W)[:, None] * np.roll(r, 1, axis=1) * r * np.roll(r, -1, axis=1)
    return num / den


def quad_interior_determinants(frame: LocalFrame) -> QuadDeterminants:
    """Closed-form coordinate-triple determinants at an interior point of a
    quadrilateral; all four are strictly positive."""
    if frame.n != 4:
        raise ValueError(f"quad determinants need n = 4, got n = {frame.n}")
    values = _quad_interior_determinant_arrays(
        {
            "half_tan": frame.half_tan[None, :],
            "grad_coeff": frame.grad_coeff[None, :],
            "dist": frame.dist[None, :],
            "weight_sum": np.array([frame.weight_sum]),
        }
    )[0]
    return QuadDeterminants(values=values, location=Location.interior())


def quad_boundary_determinants(quad: Polygon, edge: int, mu: float) -> QuadDeterminants:
    """Determinants at an open-edge point of a quadrilateral.

    At y = (1 - mu) p_l + mu p_{l+1} the two entries for the edge's
    endpoints are the finite weights of the opposite vertices scaled by the
    edge length, and the other two vanish:

        D_l     = w_{l-1}(y) / (2 |p_{l+1} - p_l|)
        D_{l+1} = w_{l+2}(y) / (2 |p_{l+1} - p_l|)

    The weights are evaluated from a boundary frame that skips the singular
    tangent of the supporting edge; every quantity involved stays finite on
    the open edge.
    """
    if quad.n != 4:
        raise ValueError(f"quad determinants need n = 4, got n = {quad.n}")
    if not 0.0 < mu < 1.0:
        raise EdgeParameterError(
            f"edge parameter must lie strictly inside (0, 1), got {mu}"
        )
    l = edge % 4
    a, b = quad.edge(l)
    y = (1.0 - mu) * a + mu * b

    v = quad.vertices
    diff = v - y[None, :]
    r = np.hypot(diff[:, 0], diff[:, 1])
    e = diff / r[:, None]

    def tangent(j: int) -> float:
        ej, ek = e[j % 4], e[(j + 1) % 4]
        return half_tangent(float(ej @ ek), float(ej[0] * ek[1] - ej[1] * ek[0]))

    t1, t2, t3 = tangent(l + 1), tangent(l + 2), tangent(l + 3)
    w_before = (t2 + t3) / r[(l + 3) % 4]     # weight of vertex l-1
    w_after = (t1 + t2) / r[(l + 2) % 4]      # weight of vertex l+2
    length = float(np.hypot(*(b - a)))

    values = np.zeros(4)
    values[l] = w_before / (2.0 * length)
    values[(l + 1) % 4] = w_after / (2.0 * length)
    return QuadDeterminants(values=values, location=Location.edge(l, float(mu)))


def quad_jacobian_from_determinants(dets: QuadDeterminants, target: Polygon) -> float:
    """Jacobian of a quad mapping assembled from the four consecutive-triple
    determinants: 2 sum_i D_i A(q_{i-1}, q_i, q_{i+1})."""
    return float(2.0 * np.dot(dets.values, corner_areas(target)))


def _triple_jacobian_arrays(
    phi: np.ndarray, grad_phi: np.ndarray, target_vertices: np.ndarray
) -> np.ndarray:
    """Vectorized triple assembly of the Jacobian for a batch of points."""
    q = target_vertices
    n = q.shape[0]
    gx = grad_phi[..., 0]
    gy = grad_phi[..., 1]
    total = np.zeros(phi.shape[0])
    for i, j, k in combinations(range(n), 3):
        d = (
            phi[:, i] * (gx[:, j] * gy[:, k] - gy[:, j] * gx[:, k])
            - phi[:, j] * (gx[:, i] * gy[:, k] - gy[:, i] * gx[:, k])
            + phi[:, k] * (gx[:, i] * gy[:, j] - gy[:, i] * gx[:, j])
        )
        total += d * signed_area(q[i], q[j], q[k])
    return 2.0 * total


def vertex_jacobian(pair: MappingPair, i: int) -> float:
    """Ratio of target to source corner areas at vertex i.

    Equals the mapping Jacobian at the vertex for coordinates that are
    smooth there (Wachspress on a convex source); otherwise it still serves
    as the sign diagnostic for the corner."""
    i = i % pair.n
    ap = float(corner_areas(pair.source)[i])
    aq = float(corner_areas(pair.target)[i])
    if abs(ap) <= 1e-12 * pair.source.diameter**2:
        raise DegenerateCornerError(
            f"source corner {i} is collinear; the area ratio is meaningless"
        )
    return aq / ap
