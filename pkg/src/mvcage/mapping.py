"""Barycentric cage mappings, Jacobian field sampling, the sampling-based
injectivity verifier, and the random search for non-injective convex pairs
with five or more vertices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import coordinates
from .coordinates import (
    _frame_arrays,
    _phi_arrays,
    _phi_gradient_arrays,
    _wachspress_phi_arrays,
)
from .errors import DeformationError, DegeneratePolygonError, ExteriorPointError
from .geometry import (
    Location,
    Polygon,
    as_point,
    as_points,
    corner_areas,
    cross,
    locate,
    locate_batch,
    perp,
    polyline_proper_intersections,
    random_convex_polygon,
)
from .jacobian import (
    MappingPair,
    _quad_interior_determinant_arrays,
    _triple_jacobian_arrays,
    quad_boundary_determinants,
    quad_jacobian_from_determinants,
)

_KIND_INTERIOR = 0
_KIND_VERTEX = 1
_KIND_EDGE = 2
_KIND_EXTERIOR = 3

PAYLOAD_KINDS = ("points", "polyline", "grid")


@dataclass(frozen=True)
class DeformationJob:
    """A batch of points to push through a cage mapping.

    kind is "points", "polyline" (connectivity follows point order) or
    "grid" (row-major, with grid_shape = (rows, cols)).  Every payload point
    must lie in the closure of the source cage.
    """

    pair: MappingPair
    payload: np.ndarray
    kind: str = "points"
    grid_shape: tuple[int, int] | None = None

    def __post_init__(self):
        object.__setattr__(self, "payload", as_points(self.payload))
        if self.kind not in PAYLOAD_KINDS:
            raise ValueError(f"unknown payload kind {self.kind!r}")
        if self.kind == "grid":
            if self.grid_shape is None:
                raise ValueError("grid payloads need grid_shape=(rows, cols)")
            rows, cols = self.grid_shape
            if rows * cols != len(self.payload):
                raise ValueError(
                    f"grid_shape {self.grid_shape} does not match payload length "
                    f"{len(self.payload)}"
                )
        kinds, _, _ = locate_batch(self.pair.source, self.payload)
        outside = np.nonzero(kinds == _KIND_EXTERIOR)[0]
        if len(outside):
            raise DeformationError(outside.tolist())


def map_points(pair: MappingPair, pts, kind: str = "mv", tol: float | None = None):
    """Map a batch of closure points of the source cage into the target.

    Boundary points map piecewise linearly onto the target boundary;
    interior points use the configured coordinates.  Raises
    DeformationError listing the indices of any exterior points.
    """
    pts = as_points(pts)
    kinds, index, param = locate_batch(pair.source, pts, tol)
    outside = np.nonzero(kinds == _KIND_EXTERIOR)[0]
    if len(outside):
        raise DeformationError(outside.tolist())

    q = pair.target.vertices
    out = np.empty_like(pts)

    interior = kinds == _KIND_INTERIOR
    if np.any(interior):
        if kind == "mv":
            fr = _frame_arrays(pair.source.vertices, pts[interior])
            phi = _phi_arrays(fr)
        elif kind == "wachspress":
            phi = _wachspress_phi_arrays(pair.source, pts[interior])
        else:
            raise ValueError(f"unknown coordinate kind {kind!r}")
        out[interior] = phi @ q

    at_vertex = kinds == _KIND_VERTEX
    if np.any(at_vertex):
        out[at_vertex] = q[index[at_vertex]]

    on_edge = kinds == _KIND_EDGE
    if np.any(on_edge):
        l = index[on_edge]
        mu = param[on_edge][:, None]
        out[on_edge] = (1.0 - mu) * q[l] + mu * q[(l + 1) % pair.n]
    return out


def map_point(pair: MappingPair, x, kind: str = "mv", tol: float | None = None):
    """Image of one closure point of the source cage."""
    x = as_point(x)
    try:
        return map_points(pair, x[None, :], kind=kind, tol=tol)[0]
    except DeformationError:
        raise ExteriorPointError(
            f"point {x.tolist()} lies outside the source cage"
        ) from None


def deform(job: DeformationJob, kind: str = "mv") -> np.ndarray:
    """Map the whole payload; ordering (and hence polyline connectivity or
    row-major grid layout) is preserved."""
    return map_points(job.pair, job.payload, kind=kind)


@dataclass(frozen=True)
class JacobianField:
    """Jacobian samples on a bounding-box grid of the source cage.

    values[i, j] is the Jacobian at (xs[j], ys[i]); NaN marks absent samples
    (exterior nodes, vertices, and boundary nodes of non-quad cages)."""

    values: np.ndarray
    xs: np.ndarray
    ys: np.ndarray

    @property
    def resolution(self) -> tuple[int, int]:
        return self.values.shape

    @property
    def bbox(self) -> tuple[float, float, float, float]:
        return (
            float(self.xs[0]),
            float(self.ys[0]),
            float(self.xs[-1]),
            float(self.ys[-1]),
        )

    @property
    def present(self) -> np.ndarray:
        return np.isfinite(self.values)

    @property
    def sample_count(self) -> int:
        return int(np.count_nonzero(self.present))

    @property
    def min_value(self) -> float:
        if self.sample_count == 0:
            return float("nan")
        return float(np.nanmin(self.values))

    @property
    def argmin_point(self) -> np.ndarray | None:
        if self.sample_count == 0:
            return None
        i, j = np.unravel_index(np.nanargmin(self.values), self.values.shape)
        return np.array([self.xs[j], self.ys[i]])

    def negative_points(self) -> np.ndarray:
        """Locations of strictly negative samples, (k, 2)."""
        ii, jj = np.nonzero(self.values < 0.0)
        return np.column_stack((self.xs[jj], self.ys[ii]))


def jacobian_field(
    pair: MappingPair,
    resolution: tuple[int, int] = (200, 200),
    tol: float | None = None,
) -> JacobianField:
    """Sample the mean value mapping Jacobian on a grid over the source
    bounding box.

    Quads use the closed-form determinants (interior) and their boundary
    values (edge nodes); other vertex counts assemble the full triple sum at
    interior nodes and leave boundary nodes absent.
    """
    rows, cols = int(resolution[0]), int(resolution[1])
    if rows < 2 or cols < 2:
        raise ValueError(f"resolution must be at least 2x2, got {resolution}")
    xmin, ymin, xmax, ymax = pair.source.bounding_box
    xs = np.linspace(xmin, xmax, cols)
    ys = np.linspace(ymin, ymax, rows)
    gx, gy = np.meshgrid(xs, ys)
    pts = np.column_stack((gx.ravel(), gy.ravel()))

    kinds, index, param = locate_batch(pair.source, pts, tol)
    values = np.full(len(pts), np.nan)

    interior = kinds == _KIND_INTERIOR
    if np.any(interior):
        fr = _frame_arrays(pair.source.vertices, pts[interior], on_singular="nan")
        if pair.n == 4:
            dets = _quad_interior_determinant_arrays(fr)
            values[interior] = 2.0 * dets @ corner_areas(pair.target)
        else:
            phi, grad_phi = _phi_gradient_arrays(fr)
            values[interior] = _triple_jacobian_arrays(
                phi, grad_phi, pair.target.vertices
            )

    if pair.n == 4:
        on_edge = np.nonzero(kinds == _KIND_EDGE)[0]
        for k in on_edge:
            mu = float(param[k])
            if not 0.0 < mu < 1.0:
                continue
            dets = quad_boundary_determinants(pair.source, int(index[k]), mu)
            values[k] = quad_jacobian_from_determinants(dets, pair.target)

    return JacobianField(values=values.reshape(rows, cols), xs=xs, ys=ys)


def _miter_offset(vertices: np.ndarray, delta: float) -> np.ndarray:
    """Offset every vertex inward by delta along the miter direction of its
    two adjacent edges (the cage is anticlockwise, so inward is left)."""
    d = np.roll(vertices, -1, axis=0) - vertices
    normals = perp(d / np.hypot(d[:, 0], d[:, 1])[:, None])
    n_prev = np.roll(normals, 1, axis=0)
    denom = 1.0 + np.einsum("ij,ij->i", n_prev, normals)
    return vertices + delta * (n_prev + normals) / denom[:, None]


def boundary_offset_curve(
    poly: Polygon, offset_scale: float = 1e-3, samples: int = 4096
) -> np.ndarray:
    """Closed curve hugging the cage boundary from the inside: the polygon
    offset inward by offset_scale x diameter, resampled uniformly by arc
    length.  The offset is halved until it yields a simple interior curve.
    """
    delta = offset_scale * poly.diameter
    for _ in range(24):
        offs = _miter_offset(poly.vertices, delta)
        kinds, _, _ = locate_batch(poly, offs)
        if np.all(kinds == _KIND_INTERIOR) and not polyline_proper_intersections(offs):
            break
        delta *= 0.5
    else:
        raise DegeneratePolygonError("could not offset the cage boundary inward")

    seg = np.roll(offs, -1, axis=0) - offs
    seg_len = np.hypot(seg[:, 0], seg[:, 1])
    cum = np.concatenate(([0.0], np.cumsum(seg_len)))
    targets = np.linspace(0.0, cum[-1], samples, endpoint=False)
    idx = np.clip(np.searchsorted(cum, targets, side="right") - 1, 0, len(offs) - 1)
    local = (targets - cum[idx]) / seg_len[idx]
    return offs[idx] + local[:, None] * seg[idx]


@dataclass(frozen=True)
class InjectivityReport:
    """Outcome of sampling-based injectivity checking.

    "injective-evidence" means no witness was found at the stated
    resolution; it is evidence, not proof.  A "non-injective" verdict always
    carries a concrete witness: a negative Jacobian sample and/or a
    properly intersecting pair of image-curve segments."""

    verdict: str
    min_jacobian: float
    argmin_location: tuple[float, float] | None
    negative_sample_count: int
    self_intersection_pairs: list[tuple[int, int]]
    samples: int
    resolution: tuple[int, int]

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "min_jacobian": self.min_jacobian,
            "argmin_location": list(self.argmin_location)
            if self.argmin_location is not None
            else None,
            "negative_sample_count": self.negative_sample_count,
            "self_intersection_pairs": [list(p) for p in self.self_intersection_pairs],
            "samples": self.samples,
            "resolution": list(self.resolution),
        }


def injectivity_report(
    pair: MappingPair,
    resolution: tuple[int, int] = (200, 200),
    tol: float | None = None,
    curve_samples: int = 4096,
    offset_scale: float = 1e-3,
) -> InjectivityReport:
    """Combine a Jacobian sign census with a self-intersection test of the
    mapped boundary-offset curve."""
    field = jacobian_field(pair, resolution, tol)
    negative = int(np.count_nonzero(field.values < 0.0))

    curve = boundary_offset_curve(pair.source, offset_scale, curve_samples)
    image = map_points(pair, curve)
    crossings = polyline_proper_intersections(image, closed=True)

    if negative > 0 or crossings:
        verdict = "non-injective"
    elif field.sample_count == 0:
        verdict = "inconclusive"
    else:
        verdict = "injective-evidence"

    argmin = field.argmin_point
    return InjectivityReport(
        verdict=verdict,
        min_jacobian=field.min_value,
        argmin_location=None if argmin is None else (float(argmin[0]), float(argmin[1])),
        negative_sample_count=negative,
        self_intersection_pairs=crossings,
        samples=field.sample_count,
        resolution=(int(resolution[0]), int(resolution[1])),
    )


def finite_difference_jacobian(
    pair: MappingPair, x, step: float | None = None, kind: str = "mv"
) -> float:
    """Central-difference Jacobian of the cage mapping at an interior point.

    Used as the independent cross-check for the analytic formulas and for
    re-verifying negative-Jacobian witnesses.  The step shrinks automatically
    if the stencil would leave the cage."""
    x = as_point(x)
    h = 1e-6 * pair.source.diameter if step is None else float(step)
    for _ in range(8):
        stencil = np.array(
            [
                [x[0] + h, x[1]],
                [x[0] - h, x[1]],
                [x[0], x[1] + h],
                [x[0], x[1] - h],
            ]
        )
        kinds, _, _ = locate_batch(pair.source, stencil)
        if np.all(kinds == _KIND_INTERIOR):
            img = map_points(pair, stencil, kind=kind)
            fx = (img[0] - img[1]) / (2.0 * h)
            fy = (img[2] - img[3]) / (2.0 * h)
            return float(cross(fx, fy))
        h *= 0.1
    raise ExteriorPointError(
        f"cannot place a finite-difference stencil around {x.tolist()}"
    )


def _refined_negative_witness(
    pair: MappingPair, coarse_resolution: tuple[int, int]
) -> np.ndarray | None:
    """Coarse Jacobian screen; on a hit, refine the grid twice (x4 around
    the running argmin) and confirm the sign by finite differences."""
    field = jacobian_field(pair, coarse_resolution)
    if not (field.sample_count and field.min_value < 0.0):
        return None

    best = field.argmin_point
    cell = np.array(
        [field.xs[1] - field.xs[0] if len(field.xs) > 1 else 0.0,
         field.ys[1] - field.ys[0] if len(field.ys) > 1 else 0.0]
    )
    src = pair.source
    for _ in range(2):
        lo = best - 2.0 * cell
        hi = best + 2.0 * cell
        xs = np.linspace(lo[0], hi[0], 9)
        ys = np.linspace(lo[1], hi[1], 9)
        gx, gy = np.meshgrid(xs, ys)
        pts = np.column_stack((gx.ravel(), gy.ravel()))
        kinds, _, _ = locate_batch(src, pts)
        inside = kinds == _KIND_INTERIOR
        if not np.any(inside):
            break
        pts = pts[inside]
        fr = _frame_arrays(src.vertices, pts, on_singular="nan")
        if pair.n == 4:
            vals = 2.0 * _quad_interior_determinant_arrays(fr) @ corner_areas(pair.target)
        else:
            phi, grad_phi = _phi_gradient_arrays(fr)
            vals = _triple_jacobian_arrays(phi, grad_phi, pair.target.vertices)
        if np.all(np.isnan(vals)):
            break
        k = int(np.nanargmin(vals))
        if vals[k] < 0.0:
            best = pts[k]
        cell = cell / 4.0

    if finite_difference_jacobian(pair, best) < 0.0:
        return best
    return None


def counterexample_search(
    n: int,
    trials: int,
    seed: int,
    coarse_resolution: tuple[int, int] = (32, 32),
    confirm_resolution: tuple[int, int] = (200, 200),
) -> MappingPair | None:
    """Search random convex cage pairs for a non-injective mean value
    mapping.

    Rejected for n < 5 (quad mappings into convex targets are always
    injective).  Each trial draws an independent convex source and target;
    pairs flagged by a coarse Jacobian screen are refined, sign-confirmed by
    finite differences, and finally re-checked at the confirmation
    resolution so that the returned pair reproduces under a standard check.
    Deterministic for a fixed seed; returns None if the budget is exhausted.
    """
    if n < 5:
        raise ValueError(
            f"counterexamples require n >= 5 vertices (got n = {n}); "
            "quad mappings into convex targets are injective"
        )
    rng = np.random.default_rng(seed)
    for _ in range(int(trials)):
        source_seed = int(rng.integers(2**63))
        target_seed = int(rng.integers(2**63))
        pair = MappingPair(
            random_convex_polygon(n, source_seed),
            random_convex_polygon(n, target_seed),
        )
        witness = _refined_negative_witness(pair, coarse_resolution)
        if witness is None:
            continue
        confirm = jacobian_field(pair, confirm_resolution)
        if confirm.sample_count and confirm.min_value < 0.0:
            return pair
    return None
