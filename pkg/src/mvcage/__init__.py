"""Mean value coordinates, barycentric cage mappings between polygons, and
Jacobian-based injectivity checking."""

from .coordinates import (
    CoordinateSet,
    GradientSet,
    LocalFrame,
    half_tangent,
    local_frame,
    mv_coordinate_gradients,
    mv_coordinates,
    mv_weight_gradients,
    wachspress_coordinates,
    wachspress_gradients,
)
from .errors import (
    BoundaryPointError,
    DeformationError,
    DegenerateCornerError,
    DegeneratePolygonError,
    EdgeParameterError,
    ExteriorPointError,
    GeometryError,
    NonConvexCageError,
    SingularAngleError,
)
from .geometry import (
    Location,
    Polygon,
    cross,
    is_convex,
    locate,
    perp,
    polyline_proper_intersections,
    random_convex_polygon,
    segments_properly_intersect,
    signed_area,
)
from .jacobian import (
    MappingPair,
    QuadDeterminants,
    det3,
    jacobian_via_triples,
    quad_boundary_determinants,
    quad_interior_determinants,
    quad_jacobian_from_determinants,
    vertex_jacobian,
)
from .mapping import (
    DeformationJob,
    InjectivityReport,
    JacobianField,
    boundary_offset_curve,
    counterexample_search,
    deform,
    finite_difference_jacobian,
    injectivity_report,
    jacobian_field,
    map_point,
    map_points,
)

__version__ = "0.1.0"

__all__ = [
    "BoundaryPointError",
    "CoordinateSet",
    "DeformationError",
    "DeformationJob",
    "DegenerateCornerError",
    "DegeneratePolygonError",
    "EdgeParameterError",
    "ExteriorPointError",
    "GeometryError",
    "GradientSet",
    "InjectivityReport",
    "JacobianField",
    "LocalFrame",
    "Location",
    "MappingPair",
    "NonConvexCageError",
    "Polygon",
    "QuadDeterminants",
    "SingularAngleError",
    "boundary_offset_curve",
    "counterexample_search",
    "cross",
    "deform",
    "det3",
    "finite_difference_jacobian",
    "half_tangent",
    "injectivity_report",
    "is_convex",
    "jacobian_field",
    "jacobian_via_triples",
    "local_frame",
    "locate",
    "map_point",
    "map_points",
    "mv_coordinate_gradients",
    "mv_coordinates",
    "mv_weight_gradients",
    "perp",
    "polyline_proper_intersections",
    "quad_boundary_determinants",
    "quad_interior_determinants",
    "quad_jacobian_from_determinants",
    "random_convex_polygon",
    "segments_properly_intersect",
    "signed_area",
    "vertex_jacobian",
    "wachspress_coordinates",
    "wachspress_gradients",
]
