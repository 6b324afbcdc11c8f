"""Planar primitives: cross products, signed areas, polygon containment,
convexity, and segment intersection tests.

All polygons are stored anticlockwise; constructors accept clockwise input
and reverse it.  Predicates use plain floating-point arithmetic (no exact
or adaptive precision), which is a known limitation: callers are expected
to operate away from degenerate configurations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegeneratePolygonError

# Default locate tolerance, times the polygon diameter.
LOCATE_TOL_SCALE = 1e-9
# Collinearity tolerance on corner areas (areas scale with diameter^2).
CONVEXITY_EPS_SCALE = 1e-12

_KIND_INTERIOR = 0
_KIND_VERTEX = 1
_KIND_EDGE = 2
_KIND_EXTERIOR = 3


def as_point(p) -> np.ndarray:
    """Coerce to a finite (2,) float64 array."""
    a = np.asarray(p, dtype=float)
    if a.shape != (2,):
        raise ValueError(f"expected a planar point, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"point coordinates must be finite, got {a}")
    return a


def as_points(pts) -> np.ndarray:
    """Coerce to a finite (m, 2) float64 array."""
    a = np.asarray(pts, dtype=float)
    if a.ndim != 2 or a.shape[1] != 2:
        raise ValueError(f"expected an (m, 2) point array, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("point coordinates must be finite")
    return a


def cross(a, b):
    """Two-dimensional cross product a^1 b^2 - a^2 b^1.

    Accepts single vectors or broadcastable (..., 2) arrays.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    out = a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]
    return float(out) if out.ndim == 0 else out


def perp(a):
    """Rotate a vector through +90 degrees: (x, y) -> (-y, x).

    cross(a, perp(a)) equals |a|^2.
    """
    a = np.asarray(a, dtype=float)
    return np.stack((-a[..., 1], a[..., 0]), axis=-1)


def signed_area(p, q, r):
    """Signed area of triangle (p, q, r); positive iff anticlockwise."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    r = np.asarray(r, dtype=float)
    return cross(q - p, r - q) * 0.5


def polygon_signed_area(vertices: np.ndarray) -> float:
    """Shoelace area of a closed vertex loop; positive iff anticlockwise."""
    v = np.asarray(vertices, dtype=float)
    w = np.roll(v, -1, axis=0)
    return float(0.5 * np.sum(v[:, 0] * w[:, 1] - w[:, 0] * v[:, 1]))


@dataclass(frozen=True)
class Location:
    """Classification of a point relative to a polygon.

    kind is one of "interior", "vertex", "edge", "exterior".  For "vertex",
    index is the vertex index; for "edge", index is the edge index (edge i
    joins vertices i and i+1 cyclically) and param is the position along it,
    strictly inside (0, 1).
    """

    kind: str
    index: int | None = None
    param: float | None = None

    @classmethod
    def interior(cls) -> "Location":
        return cls("interior")

    @classmethod
    def vertex(cls, index: int) -> "Location":
        return cls("vertex", index=index)

    @classmethod
    def edge(cls, index: int, param: float) -> "Location":
        return cls("edge", index=index, param=param)

    @classmethod
    def exterior(cls) -> "Location":
        return cls("exterior")

    @property
    def is_interior(self) -> bool:
        return self.kind == "interior"

    @property
    def is_exterior(self) -> bool:
        return self.kind == "exterior"

    @property
    def on_boundary(self) -> bool:
        return self.kind in ("vertex", "edge")


class Polygon:
    """Simple polygon with n >= 3 vertices stored anticlockwise.

    Clockwise input is reversed on construction (was_reversed records the
    flip).  Construction rejects repeated vertices, zero-length edges,
    spikes through a vertex, and self-intersections.
    """

    __slots__ = ("vertices", "was_reversed", "_diameter")

    def __init__(self, vertices, validate: bool = True):
        v = np.array(vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 2:
            raise DegeneratePolygonError(
                f"expected an (n, 2) vertex array, got shape {v.shape}"
            )
        n = v.shape[0]
        if n < 3:
            raise DegeneratePolygonError(f"polygon needs at least 3 vertices, got {n}")
        if not np.all(np.isfinite(v)):
            raise DegeneratePolygonError("vertex coordinates must be finite")

        edge_len = np.hypot(*(np.roll(v, -1, axis=0) - v).T)
        if np.any(edge_len == 0.0):
            raise DegeneratePolygonError("polygon has a zero-length edge")

        area = polygon_signed_area(v)
        if area == 0.0:
            raise DegeneratePolygonError("polygon has zero signed area")
        reversed_ = area < 0.0
        if reversed_:
            v = v[::-1].copy()

        if validate:
            self._check_simple(v)

        v.setflags(write=False)
        self.vertices = v
        self.was_reversed = reversed_
        self._diameter = None

    @staticmethod
    def _check_simple(v: np.ndarray) -> None:
        n = len(v)
        # Pinch: the same point visited twice.
        d2 = np.sum((v[:, None, :] - v[None, :, :]) ** 2, axis=2)
        d2[np.diag_indices(n)] = np.inf
        if np.min(d2) == 0.0:
            raise DegeneratePolygonError("polygon visits the same vertex twice")
        # Spike: an edge folding straight back on its predecessor.
        prev = v - np.roll(v, 1, axis=0)
        nxt = np.roll(v, -1, axis=0) - v
        folded = (cross(prev, nxt) == 0.0) & (np.sum(prev * nxt, axis=1) < 0.0)
        if np.any(folded):
            raise DegeneratePolygonError("polygon has a spike vertex")
        # Proper intersection between non-adjacent edges (includes a vertex
        # lying strictly inside another edge).
        b = np.roll(v, -1, axis=0)
        for i in range(n):
            for j in range(i + 1, n):
                if j == i + 1 or (i == 0 and j == n - 1):
                    continue
                if segments_properly_intersect((v[i], b[i]), (v[j], b[j])):
                    raise DegeneratePolygonError(
                        f"polygon edges {i} and {j} intersect"
                    )

    @property
    def n(self) -> int:
        return self.vertices.shape[0]

    @property
    def diameter(self) -> float:
        if self._diameter is None:
            v = self.vertices
            d2 = np.sum((v[:, None, :] - v[None, :, :]) ** 2, axis=2)
            object.__setattr__(self, "_diameter", float(np.sqrt(d2.max())))
        return self._diameter

    @property
    def bounding_box(self) -> tuple[float, float, float, float]:
        """(xmin, ymin, xmax, ymax)."""
        v = self.vertices
        return (
            float(v[:, 0].min()),
            float(v[:, 1].min()),
            float(v[:, 0].max()),
            float(v[:, 1].max()),
        )

    @property
    def area(self) -> float:
        return polygon_signed_area(self.vertices)

    def vertex(self, i: int) -> np.ndarray:
        return self.vertices[i % self.n]

    def edge(self, i: int) -> tuple[np.ndarray, np.ndarray]:
        return self.vertices[i % self.n], self.vertices[(i + 1) % self.n]

    def locate_tol(self, tol: float | None = None) -> float:
        return LOCATE_TOL_SCALE * self.diameter if tol is None else float(tol)

    def __repr__(self) -> str:
        return f"Polygon({self.vertices.tolist()!r})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Polygon) and np.array_equal(
            self.vertices, other.vertices
        )

    def __hash__(self):
        return hash(self.vertices.tobytes())


def _orient(px, py, qx, qy, rx, ry) -> float:
    return (qx - px) * (ry - py) - (qy - py) * (rx - px)


def _strictly_between(ax, ay, bx, by, px, py) -> bool:
    """p strictly inside segment (a, b), assuming p collinear with it."""
    if abs(bx - ax) >= abs(by - ay):
        lo, hi = (ax, bx) if ax < bx else (bx, ax)
        return lo < px < hi
    lo, hi = (ay, by) if ay < by else (by, ay)
    return lo < py < hi


def _proper_intersect(ax, ay, bx, by, cx, cy, dx, dy) -> bool:
    d1 = _orient(cx, cy, dx, dy, ax, ay)
    d2 = _orient(cx, cy, dx, dy, bx, by)
    d3 = _orient(ax, ay, bx, by, cx, cy)
    d4 = _orient(ax, ay, bx, by, dx, dy)
    if ((d1 > 0) != (d2 > 0)) and d1 != 0 and d2 != 0 and (
        (d3 > 0) != (d4 > 0)
    ) and d3 != 0 and d4 != 0:
        return True
    if d1 == 0 and _strictly_between(cx, cy, dx, dy, ax, ay):
        return True
    if d2 == 0 and _strictly_between(cx, cy, dx, dy, bx, by):
        return True
    if d3 == 0 and _strictly_between(ax, ay, bx, by, cx, cy):
        return True
    if d4 == 0 and _strictly_between(ax, ay, bx, by, dx, dy):
        return True
    if d1 == 0 and d2 == 0 and d3 == 0 and d4 == 0:
        # Collinear: do the open intervals overlap?
        if abs(bx - ax) >= abs(by - ay):
            lo1, hi1 = min(ax, bx), max(ax, bx)
            lo2, hi2 = min(cx, dx), max(cx, dx)
        else:
            lo1, hi1 = min(ay, by), max(ay, by)
            lo2, hi2 = min(cy, dy), max(cy, dy)
        return max(lo1, lo2) < min(hi1, hi2)
    return False


def segments_properly_intersect(s1, s2) -> bool:
    """True iff the open segments share a point, or an endpoint of one lies
    strictly inside the other.  Touching at shared endpoints does not count.
    """
    a, b = as_point(s1[0]), as_point(s1[1])
    c, d = as_point(s2[0]), as_point(s2[1])
    return _proper_intersect(a[0], a[1], b[0], b[1], c[0], c[1], d[0], d[1])


def _strictly_between_arr(ax, ay, bx, by, px, py):
    """Vectorized: p strictly inside segment (a, b), given p collinear."""
    use_x = np.abs(bx - ax) >= np.abs(by - ay)
    lo_x = np.minimum(ax, bx)
    hi_x = np.maximum(ax, bx)
    lo_y = np.minimum(ay, by)
    hi_y = np.maximum(ay, by)
    return np.where(
        use_x, (lo_x < px) & (px < hi_x), (lo_y < py) & (py < hi_y)
    )


def polyline_proper_intersections(points, closed: bool = True) -> list[tuple[int, int]]:
    """All properly intersecting segment pairs of a polyline.

    Returns (i, j) index pairs with i < j; segment i joins points i and i+1
    (cyclically if closed).  Uses an x-interval sweep so that simple curves
    cost close to O(m log m) rather than O(m^2).
    """
    pts = as_points(points)
    if closed:
        a = pts
        b = np.roll(pts, -1, axis=0)
    else:
        a = pts[:-1]
        b = pts[1:]
    m = len(a)
    if m < 2:
        return []

    xmin = np.minimum(a[:, 0], b[:, 0])
    xmax = np.maximum(a[:, 0], b[:, 0])
    ymin = np.minimum(a[:, 1], b[:, 1])
    ymax = np.maximum(a[:, 1], b[:, 1])

    order = np.argsort(xmin, kind="stable")
    xs = xmin[order]
    hi = np.searchsorted(xs, xmax[order], side="right")

    # candidate pairs: each sorted slot k against slots k+1 .. hi[k]-1
    counts = np.maximum(hi - np.arange(m) - 1, 0)
    total = int(counts.sum())
    if total == 0:
        return []
    group = np.repeat(np.arange(m), counts)
    within = np.arange(total) - np.repeat(np.cumsum(counts) - counts, counts)
    I = order[group]
    J = order[group + 1 + within]

    # y-interval overlap reject.
    keep = (ymin[I] <= ymax[J]) & (ymin[J] <= ymax[I])
    I, J = I[keep], J[keep]
    if len(I) == 0:
        return []

    A, B, C, D = a[I], b[I], a[J], b[J]
    d1 = cross(D - C, A - C)
    d2 = cross(D - C, B - C)
    d3 = cross(B - A, C - A)
    d4 = cross(B - A, D - A)
    hit = (d1 * d2 < 0) & (d3 * d4 < 0)

    # zero orientations: endpoint strictly inside the other segment
    for d, seg, pnt in (
        (d1, (C, D), A),
        (d2, (C, D), B),
        (d3, (A, B), C),
        (d4, (A, B), D),
    ):
        hit |= (d == 0) & _strictly_between_arr(
            seg[0][:, 0], seg[0][:, 1], seg[1][:, 0], seg[1][:, 1],
            pnt[:, 0], pnt[:, 1],
        )

    # fully collinear pairs: do the open intervals overlap?
    col = (d1 == 0) & (d2 == 0) & (d3 == 0) & (d4 == 0) & ~hit
    if np.any(col):
        use_x = np.abs(B[col, 0] - A[col, 0]) >= np.abs(B[col, 1] - A[col, 1])
        lo1 = np.where(use_x, np.minimum(A[col, 0], B[col, 0]), np.minimum(A[col, 1], B[col, 1]))
        hi1 = np.where(use_x, np.maximum(A[col, 0], B[col, 0]), np.maximum(A[col, 1], B[col, 1]))
        lo2 = np.where(use_x, np.minimum(C[col, 0], D[col, 0]), np.minimum(C[col, 1], D[col, 1]))
        hi2 = np.where(use_x, np.maximum(C[col, 0], D[col, 0]), np.maximum(C[col, 1], D[col, 1]))
        overlap = np.maximum(lo1, lo2) < np.minimum(hi1, hi2)
        hit[np.nonzero(col)[0][overlap]] = True

    lo = np.minimum(I[hit], J[hit])
    hi_idx = np.maximum(I[hit], J[hit])
    return sorted({(int(i), int(j)) for i, j in zip(lo, hi_idx)})


def _edge_projection(vertices: np.ndarray, pts: np.ndarray):
    """Per point and edge: squared distance to the edge segment and the
    (clipped) projection parameter along it."""
    a = vertices
    b = np.roll(vertices, -1, axis=0)
    ab = b - a                                        # (n, 2)
    len2 = np.sum(ab * ab, axis=1)                    # (n,)
    ap = pts[:, None, :] - a[None, :, :]              # (m, n, 2)
    t = np.einsum("mni,ni->mn", ap, ab) / len2[None, :]
    t = np.clip(t, 0.0, 1.0)
    closest = a[None, :, :] + t[..., None] * ab[None, :, :]
    diff = pts[:, None, :] - closest
    dist2 = np.sum(diff * diff, axis=2)
    return dist2, t


def _parity_inside(vertices: np.ndarray, pts: np.ndarray) -> np.ndarray:
    """Even-odd crossing test; boundary-near points must be pre-filtered."""
    x = pts[:, 0][:, None]
    y = pts[:, 1][:, None]
    xa = vertices[:, 0][None, :]
    ya = vertices[:, 1][None, :]
    xb = np.roll(vertices[:, 0], -1)[None, :]
    yb = np.roll(vertices[:, 1], -1)[None, :]
    straddles = (ya > y) != (yb > y)
    denom = np.where(yb - ya == 0.0, 1.0, yb - ya)
    xint = xa + (y - ya) * (xb - xa) / denom
    crossings = np.sum(straddles & (x < xint), axis=1)
    return crossings % 2 == 1


def locate_batch(poly: Polygon, pts, tol: float | None = None):
    """Vectorized locate.  Returns (kind, index, param) arrays where kind is
    0 interior, 1 vertex, 2 edge, 3 exterior."""
    pts = as_points(pts)
    tol = poly.locate_tol(tol)
    v = poly.vertices
    m = len(pts)

    kind = np.full(m, _KIND_EXTERIOR, dtype=np.int8)
    index = np.full(m, -1, dtype=np.int64)
    param = np.full(m, np.nan)

    dv2 = np.sum((pts[:, None, :] - v[None, :, :]) ** 2, axis=2)
    near_v = np.argmin(dv2, axis=1)
    at_vertex = dv2[np.arange(m), near_v] <= tol * tol

    de2, t = _edge_projection(v, pts)
    near_e = np.argmin(de2, axis=1)
    at_edge = (de2[np.arange(m), near_e] <= tol * tol) & ~at_vertex

    kind[at_vertex] = _KIND_VERTEX
    index[at_vertex] = near_v[at_vertex]

    kind[at_edge] = _KIND_EDGE
    index[at_edge] = near_e[at_edge]
    mu = t[np.arange(m), near_e]
    param[at_edge] = mu[at_edge]

    rest = ~(at_vertex | at_edge)
    if np.any(rest):
        inside = _parity_inside(v, pts[rest])
        kind[rest] = np.where(inside, _KIND_INTERIOR, _KIND_EXTERIOR)
    return kind, index, param


def boundary_distance(poly: Polygon, pts) -> np.ndarray:
    """Distance from each point to the polygon boundary (unsigned)."""
    pts = as_points(pts)
    dist2, _ = _edge_projection(poly.vertices, pts)
    return np.sqrt(dist2.min(axis=1))


def locate(poly: Polygon, x, tol: float | None = None) -> Location:
    """Classify a point against the polygon.

    Points within tol (default 1e-9 x diameter) of the boundary snap to
    Edge or Vertex, with Vertex taking precedence.
    """
    kind, index, param = locate_batch(poly, as_point(x)[None, :], tol)
    k = int(kind[0])
    if k == _KIND_INTERIOR:
        return Location.interior()
    if k == _KIND_VERTEX:
        return Location.vertex(int(index[0]))
    if k == _KIND_EDGE:
        return Location.edge(int(index[0]), float(param[0]))
    return Location.exterior()


def corner_areas(poly: Polygon) -> np.ndarray:
    """Signed area of each corner triangle (p_{i-1}, p_i, p_{i+1})."""
    v = poly.vertices
    return signed_area(np.roll(v, 1, axis=0), v, np.roll(v, -1, axis=0))


def is_convex(poly: Polygon, eps: float | None = None) -> bool:
    """True iff no corner turns clockwise (within eps) and at least three
    corners turn strictly anticlockwise.

    eps defaults to 1e-12 x diameter^2 (areas scale quadratically).
    """
    if eps is None:
        eps = CONVEXITY_EPS_SCALE * poly.diameter**2
    areas = corner_areas(poly)
    return bool(np.all(areas >= -eps) and np.count_nonzero(areas > eps) >= 3)


def _random_convex_vertices(rng: np.random.Generator, n: int) -> np.ndarray:
    # Any set of edge vectors summing to zero, chained in angular order,
    # closes into a convex polygon.  Log-normal edge lengths give the draw a
    # heavy tail: most polygons are ordinary, but vertex clusters and
    # near-degenerate edges appear with useful frequency (the counterexample
    # search relies on reaching such shapes).
    dirs = rng.uniform(0.0, 2.0 * np.pi, n - 1)
    lens = np.exp(rng.normal(0.0, 2.0, n - 1))
    edges = np.column_stack((lens * np.cos(dirs), lens * np.sin(dirs)))
    edges = np.vstack((edges, -edges.sum(axis=0)))
    order = np.argsort(np.arctan2(edges[:, 1], edges[:, 0]))
    return np.cumsum(edges[order], axis=0)


def random_convex_polygon(n: int, seed: int) -> Polygon:
    """Random convex anticlockwise polygon with n vertices, deterministic
    for a fixed seed.

    Shapes are heavy-tailed (clustered vertices and short edges occur), but
    needles are rejected: the area is at least 1% of diameter squared, and
    the shortest edge at least 1e-6 of the diameter."""
    if n < 3:
        raise ValueError(f"need n >= 3 vertices, got {n}")
    rng = np.random.default_rng(seed)
    for _ in range(256):
        verts = _random_convex_vertices(rng, n)
        try:
            poly = Polygon(verts)
        except DegeneratePolygonError:
            continue
        d = poly.diameter
        edge_len = np.hypot(*(np.roll(poly.vertices, -1, axis=0) - poly.vertices).T)
        if np.min(edge_len) < 1e-6 * d:
            continue
        if poly.area < 1e-2 * d * d:
            continue
        if is_convex(poly):
            return poly
    raise RuntimeError(f"could not draw a usable convex polygon with n={n}")
