"""Shared generators for random test polygons and sample points."""

import numpy as np
import pytest

from mvcage.errors import DegeneratePolygonError
from mvcage.geometry import (
    Polygon,
    boundary_distance,
    corner_areas,
    is_convex,
    locate_batch,
    random_convex_polygon,
    signed_area,
)


def random_simple_polygon(rng, n, min_corner_scale=1e-4):
    """Star-shaped simple polygon from angularly sorted random points.

    Mixes convex and concave shapes; rejects draws with nearly-flat corners
    or tiny edges so that gradient tests stay well conditioned."""
    for _ in range(200):
        pts = rng.normal(0.0, 1.0, (n, 2)) * rng.uniform(0.5, 2.0)
        pts += rng.normal(0.0, 5.0, 2)
        c = pts.mean(axis=0)
        order = np.argsort(np.arctan2(pts[:, 1] - c[1], pts[:, 0] - c[0]))
        try:
            poly = Polygon(pts[order])
        except DegeneratePolygonError:
            continue
        d = poly.diameter
        if poly.area < 0.05 * d * d:
            continue
        edges = np.roll(poly.vertices, -1, axis=0) - poly.vertices
        if np.min(np.hypot(edges[:, 0], edges[:, 1])) < 1e-2 * d:
            continue
        if np.min(np.abs(corner_areas(poly))) < min_corner_scale * d * d:
            continue
        return poly
    raise RuntimeError(f"could not draw a usable simple polygon with n={n}")


def random_simple_quad(rng):
    """Random simple quad, convex or concave."""
    return random_simple_polygon(rng, 4)


def random_concave_quad(rng, reflex_scale=0.02):
    """Simple quad with exactly one decisively reflex corner."""
    for _ in range(500):
        quad = random_simple_polygon(rng, 4)
        areas = corner_areas(quad)
        d2 = quad.diameter**2
        if np.count_nonzero(areas < 0) == 1 and areas.min() < -reflex_scale * d2:
            return quad
    raise RuntimeError("could not draw a concave quad")


def random_convex_quad(rng):
    return random_convex_polygon(4, int(rng.integers(2**63)))


def decisively_concave_quad(rng, depth_lo=1.2, depth_hi=2.4):
    """Concave 'dart' quad whose reflex vertex is pulled well past the
    centroid of the other three vertices.

    Mean value mappings from a convex source onto MILDLY concave targets can
    be injective (the coordinates are not C1 at the vertices, so the
    corner-area sign argument does not bind them); in this decisive regime
    the mapping folds reliably."""
    for _ in range(500):
        tri = rng.normal(0.0, 1.0, (3, 2))
        area = signed_area(tri[0], tri[1], tri[2])
        if abs(area) < 0.3:
            continue
        if area < 0:
            tri = tri[::-1]
        mid = (tri[2] + tri[0]) / 2.0
        centroid = tri.mean(axis=0)
        dart = mid + rng.uniform(depth_lo, depth_hi) * (centroid - mid)
        try:
            quad = Polygon(np.vstack((tri, dart[None, :])))
        except DegeneratePolygonError:
            continue
        areas = corner_areas(quad)
        if np.count_nonzero(areas < 0) != 1:
            continue
        d = quad.diameter
        edge_len = np.hypot(*(np.roll(quad.vertices, -1, axis=0) - quad.vertices).T)
        if np.min(edge_len) < 0.03 * d:
            continue
        return quad
    raise RuntimeError("could not draw a decisively concave quad")


def fat_convex_quad(rng):
    """Convex quad with edge, corner, and area floors."""
    for _ in range(2000):
        quad = random_simple_polygon(rng, 4)
        d = quad.diameter
        edge_len = np.hypot(*(np.roll(quad.vertices, -1, axis=0) - quad.vertices).T)
        if (
            is_convex(quad)
            and quad.area >= 0.2 * d * d
            and np.min(edge_len) >= 0.2 * d
            and np.min(corner_areas(quad)) >= 0.03 * d * d
        ):
            return quad
    raise RuntimeError("could not draw a fat convex quad")


def well_conditioned_quad(rng):
    """Fat simple quad: short-edge, corner-area, and area floors keep the
    boundary-limit constants moderate."""
    for _ in range(2000):
        quad = random_simple_polygon(rng, 4)
        d = quad.diameter
        edge_len = np.hypot(*(np.roll(quad.vertices, -1, axis=0) - quad.vertices).T)
        if (
            quad.area >= 0.15 * d * d
            and np.min(edge_len) >= 0.25 * d
            and np.min(np.abs(corner_areas(quad))) >= 0.03 * d * d
        ):
            return quad
    raise RuntimeError("could not draw a well conditioned quad")


def interior_points(poly, rng, count, margin_scale=0.0):
    """Uniform samples strictly inside the polygon, at least
    margin_scale x diameter away from the boundary."""
    margin = margin_scale * poly.diameter
    xmin, ymin, xmax, ymax = poly.bounding_box
    out = []
    for _ in range(200):
        cand = np.column_stack(
            (
                rng.uniform(xmin, xmax, 4 * count),
                rng.uniform(ymin, ymax, 4 * count),
            )
        )
        kinds, _, _ = locate_batch(poly, cand)
        cand = cand[kinds == 0]
        if margin > 0.0 and len(cand):
            cand = cand[boundary_distance(poly, cand) >= margin]
        out.extend(cand.tolist())
        if len(out) >= count:
            return np.asarray(out[:count])
    raise RuntimeError("interior sampling failed; polygon too thin for margin")


def interior_point(poly, rng, margin_scale=0.0):
    return interior_points(poly, rng, 1, margin_scale)[0]


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture
def unit_square():
    return Polygon([(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)])


@pytest.fixture
def concave_quad():
    # anticlockwise, one reflex corner at (0.75, 0.75)
    return Polygon([(0.0, 0.0), (2.0, 0.0), (0.75, 0.75), (0.0, 2.0)])
