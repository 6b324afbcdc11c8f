"""Command line interface.

Exit codes: 0 success (including injective-evidence verdicts), 1 parse or
validation errors, 2 reserved for non-injective verdicts from `check`.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .coordinates import local_frame, mv_coordinate_gradients, mv_coordinates
from .errors import GeometryError
from .geometry import locate
from .jacobian import MappingPair
from .mapping import (
    DeformationJob,
    counterexample_search,
    deform,
    injectivity_report,
    jacobian_field,
)
from .scene import Scene, SceneError, SceneOptions, read_scene, write_scene
from .service import DEFAULT_PORT, PORT_ENV_VAR
from .svgfig import write_figure

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NON_INJECTIVE = 2


def _parse_point(text: str) -> np.ndarray:
    try:
        x, y = (float(part) for part in text.split(","))
    except ValueError:
        raise SceneError(f"expected a point as X,Y, got {text!r}") from None
    return np.array([x, y])


def _parse_resolution(text: str) -> tuple[int, int]:
    try:
        rows, cols = (int(part) for part in text.lower().split("x"))
    except ValueError:
        raise SceneError(f"expected a resolution as ROWSxCOLS, got {text!r}") from None
    return rows, cols


def _load_scene(args) -> Scene:
    scene = read_scene(args.scene)
    if getattr(args, "tol", None) is not None:
        scene.options.tolerance = args.tol
    if getattr(args, "res", None) is not None:
        scene.options.resolution = args.res
    scene.options.validate()
    return scene


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_coords(args) -> int:
    scene = _load_scene(args)
    x = args.at
    phi = mv_coordinates(scene.source, x, tol=scene.options.tolerance).phi
    grad = None
    if locate(scene.source, x, tol=scene.options.tolerance).is_interior:
        frame = local_frame(scene.source, x, tol=scene.options.tolerance)
        grad = mv_coordinate_gradients(frame).grad_phi.tolist()
    body = {"point": x.tolist(), "phi": phi.tolist(), "grad_phi": grad}
    _emit(json.dumps(body, indent=2) + "\n", args.out)
    return EXIT_OK


def cmd_map(args) -> int:
    scene = _load_scene(args)
    if scene.payload is None:
        raise SceneError("scene has no payload to map")
    job = DeformationJob(scene.pair, scene.payload, kind="polyline")
    image = deform(job, kind=scene.options.coordinate_kind)
    body = {"points": image.tolist()}
    _emit(json.dumps(body, indent=2) + "\n", args.out)
    return EXIT_OK


def cmd_field(args) -> int:
    scene = _load_scene(args)
    field = jacobian_field(
        scene.pair, scene.options.resolution, tol=scene.options.tolerance
    )
    if args.format == "json":
        grid = [
            [None if np.isnan(v) else v for v in row] for row in field.values.tolist()
        ]
        body = {
            "grid": grid,
            "bbox": list(field.bbox),
            "min": None if np.isnan(field.min_value) else field.min_value,
            "argmin": None
            if field.argmin_point is None
            else field.argmin_point.tolist(),
        }
        _emit(json.dumps(body, indent=2) + "\n", args.out)
    else:
        lines = []
        for row in field.values:
            lines.append(" ".join("nan" if np.isnan(v) else f"{v:.12g}" for v in row))
        _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_check(args) -> int:
    scene = _load_scene(args)
    report = injectivity_report(
        scene.pair, scene.options.resolution, tol=scene.options.tolerance
    )
    body = report.to_dict()
    if body["min_jacobian"] is not None and np.isnan(body["min_jacobian"]):
        body["min_jacobian"] = None
    _emit(json.dumps(body, indent=2) + "\n", args.out)
    return EXIT_NON_INJECTIVE if report.verdict == "non-injective" else EXIT_OK


def cmd_search(args) -> int:
    pair = counterexample_search(args.n, trials=args.trials, seed=args.seed)
    if pair is None:
        _emit(
            json.dumps({"found": False, "n": args.n, "trials": args.trials}) + "\n",
            None,
        )
        return EXIT_OK
    scene = Scene(source=pair.source, target=pair.target)
    if args.out:
        write_scene(scene, args.out)
        sys.stdout.write(f"counterexample written to {args.out}\n")
    else:
        from .scene import scene_to_json

        sys.stdout.write(scene_to_json(scene))
    return EXIT_OK


def cmd_figure(args) -> int:
    scene = _load_scene(args)
    write_figure(scene, args.out)
    sys.stdout.write(f"figure written to {args.out}\n")
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    port = args.port
    if port is None:
        port = int(os.environ.get(PORT_ENV_VAR, DEFAULT_PORT))
    uvicorn.run(create_app(), host="127.0.0.1", port=port, log_level="info")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mvcage",
        description="Mean value cage mappings: coordinates, Jacobian fields, "
        "injectivity checks, counterexample search, and figures.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_scene_arg(p):
        p.add_argument("scene", help="scene JSON file")
        p.add_argument("--tol", type=float, default=None, help="locate tolerance override")
        p.add_argument("--out", default=None, help="output file (default stdout)")

    p = sub.add_parser("coords", help="print coordinates and gradients at a point")
    add_scene_arg(p)
    p.add_argument("--at", type=_parse_point, required=True, metavar="X,Y")
    p.set_defaults(fn=cmd_coords)

    p = sub.add_parser("map", help="map the scene payload through the cage pair")
    add_scene_arg(p)
    p.set_defaults(fn=cmd_map)

    p = sub.add_parser("field", help="sample the Jacobian on a grid")
    add_scene_arg(p)
    p.add_argument("--res", type=_parse_resolution, default=None, metavar="RxC")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(fn=cmd_field)

    p = sub.add_parser("check", help="injectivity verdict (exit 2 if non-injective)")
    add_scene_arg(p)
    p.add_argument("--res", type=_parse_resolution, default=None, metavar="RxC")
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("search", help="search for a non-injective convex pair")
    p.add_argument("--n", type=int, required=True, help="vertex count (>= 5)")
    p.add_argument("--trials", type=int, default=100000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="write the found scene here")
    p.set_defaults(fn=cmd_search)

    p = sub.add_parser("figure", help="render the scene as a two-panel SVG")
    add_scene_arg(p)
    p.set_defaults(fn=cmd_figure)
    # figure requires an output file
    p.set_defaults(requires_out=True)

    p = sub.add_parser("serve", help="start the local JSON service")
    p.add_argument("--port", type=int, default=None)
    p.set_defaults(fn=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "requires_out", False) and not args.out:
        parser.error("figure requires --out FILE.svg")
    try:
        return args.fn(args)
    except (SceneError, GeometryError, OSError, ValueError) as err:
        sys.stderr.write(f"error: {err}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
