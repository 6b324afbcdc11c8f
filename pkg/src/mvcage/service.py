"""Local HTTP service exposing coordinates, mapping, Jacobian fields, and
injectivity checks as stateless JSON endpoints (the editor's backend).

Domain errors (exterior points, degenerate polygons, ...) come back as a
structured {"error": {...}} body with status 200; schema violations get the
usual 422.
"""

from __future__ import annotations

import math

import numpy as np
from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .coordinates import local_frame, mv_coordinate_gradients, mv_coordinates
from .errors import GeometryError
from .geometry import Polygon, locate
from .jacobian import MappingPair
from .mapping import injectivity_report, jacobian_field, map_points
from .scene import SceneError

Vertex = tuple[float, float]

DEFAULT_PORT = 8787
PORT_ENV_VAR = "MVCAGE_PORT"


class CoordsRequest(BaseModel):
    polygon: list[Vertex] = Field(min_length=3)
    point: Vertex


class MapRequest(BaseModel):
    source: list[Vertex] = Field(min_length=3)
    target: list[Vertex] = Field(min_length=3)
    points: list[Vertex]


class FieldRequest(BaseModel):
    source: list[Vertex] = Field(min_length=3)
    target: list[Vertex] = Field(min_length=3)
    res: tuple[int, int] = (64, 64)


class CheckRequest(BaseModel):
    source: list[Vertex] = Field(min_length=3)
    target: list[Vertex] = Field(min_length=3)
    res: tuple[int, int] = (200, 200)


def _error_body(err: Exception) -> JSONResponse:
    return JSONResponse(
        {"error": {"type": type(err).__name__, "message": str(err)}}
    )


def _clean(value):
    """NaN is not valid JSON; absent samples become null."""
    if isinstance(value, float) and math.isnan(value):
        return None
    return value


def create_app() -> FastAPI:
    app = FastAPI(title="mvcage", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(GeometryError)
    async def on_geometry_error(request, err):
        return _error_body(err)

    @app.exception_handler(SceneError)
    async def on_scene_error(request, err):
        return _error_body(err)

    @app.post("/coords")
    async def coords(req: CoordsRequest):
        poly = Polygon(req.polygon)
        phi = mv_coordinates(poly, req.point).phi
        grad = None
        if locate(poly, req.point).is_interior:
            grad = mv_coordinate_gradients(local_frame(poly, req.point)).grad_phi
        return {
            "phi": phi.tolist(),
            "grad_phi": grad.tolist() if grad is not None else None,
        }

    @app.post("/map")
    async def map_batch(req: MapRequest):
        pair = MappingPair(Polygon(req.source), Polygon(req.target))
        if not req.points:
            return {"points": []}
        out = map_points(pair, np.asarray(req.points, dtype=float))
        return {"points": out.tolist()}

    @app.post("/field")
    async def field(req: FieldRequest):
        pair = MappingPair(Polygon(req.source), Polygon(req.target))
        result = jacobian_field(pair, req.res)
        grid = [[_clean(v) for v in row] for row in result.values.tolist()]
        argmin = result.argmin_point
        return {
            "grid": grid,
            "bbox": list(result.bbox),
            "min": _clean(result.min_value),
            "argmin": argmin.tolist() if argmin is not None else None,
        }

    @app.post("/check")
    async def check(req: CheckRequest):
        pair = MappingPair(Polygon(req.source), Polygon(req.target))
        report = injectivity_report(pair, req.res)
        body = report.to_dict()
        body["min_jacobian"] = _clean(body["min_jacobian"])
        return body

    return app


app = create_app()
