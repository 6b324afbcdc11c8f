"""Scene files: JSON descriptions of a source cage, target cage, optional
payload polyline, and evaluation options.

Floats are serialized with 17 significant digits, which round-trips IEEE
doubles exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import DegeneratePolygonError
from .geometry import Polygon, as_points


class SceneError(ValueError):
    """Scene file malformed or inconsistent."""


@dataclass
class SceneOptions:
    resolution: tuple[int, int] = (200, 200)
    tolerance: float | None = None
    coordinate_kind: str = "mv"

    def validate(self):
        rows, cols = self.resolution
        if rows < 2 or cols < 2:
            raise SceneError(f"resolution must be at least 2x2, got {self.resolution}")
        if self.coordinate_kind not in ("mv", "wachspress"):
            raise SceneError(f"unknown coordinate kind {self.coordinate_kind!r}")
        if self.tolerance is not None and self.tolerance < 0:
            raise SceneError("tolerance must be non-negative")


@dataclass
class Scene:
    source: Polygon
    target: Polygon
    payload: np.ndarray | None = None
    options: SceneOptions = field(default_factory=SceneOptions)

    @property
    def pair(self):
        from .jacobian import MappingPair

        return MappingPair(self.source, self.target)


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _vertex_rows(pts) -> str:
    return ", ".join(f"[{_fmt(x)}, {_fmt(y)}]" for x, y in pts)


def scene_to_json(scene: Scene) -> str:
    opts = scene.options
    lines = [
        "{",
        f'  "source_polygon": [{_vertex_rows(scene.source.vertices)}],',
        f'  "target_polygon": [{_vertex_rows(scene.target.vertices)}],',
    ]
    if scene.payload is not None:
        lines.append(f'  "payload": [{_vertex_rows(scene.payload)}],')
    else:
        lines.append('  "payload": null,')
    tol = "null" if opts.tolerance is None else _fmt(opts.tolerance)
    lines.append(
        '  "options": {'
        f'"resolution": [{opts.resolution[0]}, {opts.resolution[1]}], '
        f'"tolerance": {tol}, '
        f'"coordinate_kind": "{opts.coordinate_kind}"'
        "}"
    )
    lines.append("}")
    return "\n".join(lines) + "\n"


def write_scene(scene: Scene, path) -> None:
    with open(path, "w") as fh:
        fh.write(scene_to_json(scene))


def _require_vertex_list(obj, name: str):
    if not isinstance(obj, list) or len(obj) < 3:
        raise SceneError(f"{name} must be a list of at least 3 [x, y] pairs")
    for row in obj:
        if (
            not isinstance(row, list)
            or len(row) != 2
            or not all(isinstance(v, (int, float)) for v in row)
        ):
            raise SceneError(f"{name} entries must be [x, y] number pairs")
    return np.asarray(obj, dtype=float)


def scene_from_dict(data: dict) -> Scene:
    if not isinstance(data, dict):
        raise SceneError("scene must be a JSON object")
    for key in ("source_polygon", "target_polygon"):
        if key not in data:
            raise SceneError(f"scene is missing {key!r}")
    try:
        source = Polygon(_require_vertex_list(data["source_polygon"], "source_polygon"))
        target = Polygon(_require_vertex_list(data["target_polygon"], "target_polygon"))
    except DegeneratePolygonError as err:
        raise SceneError(f"invalid cage polygon: {err}") from err

    payload = None
    raw_payload = data.get("payload")
    if raw_payload is not None:
        if not isinstance(raw_payload, list) or not raw_payload:
            raise SceneError("payload must be null or a non-empty list of [x, y] pairs")
        payload = as_points(raw_payload)

    options = SceneOptions()
    raw_opts = data.get("options") or {}
    if not isinstance(raw_opts, dict):
        raise SceneError("options must be an object")
    if raw_opts.get("resolution") is not None:
        res = raw_opts["resolution"]
        if not (isinstance(res, list) and len(res) == 2):
            raise SceneError("options.resolution must be [rows, cols]")
        options.resolution = (int(res[0]), int(res[1]))
    if raw_opts.get("tolerance") is not None:
        options.tolerance = float(raw_opts["tolerance"])
    if raw_opts.get("coordinate_kind") is not None:
        options.coordinate_kind = str(raw_opts["coordinate_kind"])
    options.validate()
    return Scene(source=source, target=target, payload=payload, options=options)


def parse_scene(text: str, filename: str = "<scene>") -> Scene:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as err:
        raise SceneError(f"{filename}:{err.lineno}:{err.colno}: {err.msg}") from err
    try:
        return scene_from_dict(data)
    except SceneError as err:
        raise SceneError(f"{filename}: {err}") from err


def read_scene(path) -> Scene:
    with open(path) as fh:
        text = fh.read()
    return parse_scene(text, filename=str(path))
