"""Exception types shared across the package."""


class GeometryError(ValueError):
    """Base class for domain errors raised by this package."""


class DegeneratePolygonError(GeometryError):
    """Polygon violates its invariants (too few vertices, zero-length edge,
    zero area, spike, or self-intersection)."""


class ExteriorPointError(GeometryError):
    """An operation required a point inside the polygon's closure."""


class BoundaryPointError(GeometryError):
    """An operation required a strictly interior point."""


class NonConvexCageError(GeometryError):
    """An operation defined only on convex polygons received a non-convex one."""


class SingularAngleError(GeometryError):
    """Half-angle tangent undefined: the two directions are opposite, so the
    evaluation point lies on the open edge between them.  Callers must route
    such points through the boundary formulas instead."""


class DegenerateCornerError(GeometryError):
    """Vertex Jacobian requested at a corner whose triangle area is ~zero."""


class EdgeParameterError(GeometryError):
    """Edge parameter outside the open interval (0, 1); endpoints are
    vertices, not edge points."""


class DeformationError(GeometryError):
    """One or more payload points fall outside the source cage."""

    def __init__(self, indices, message=None):
        self.indices = list(indices)
        if message is None:
            message = f"payload points outside the source cage at indices {self.indices}"
        super().__init__(message)
