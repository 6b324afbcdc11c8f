"""Two-panel SVG figures: the source cage with its payload curve on the
left, the target cage with the deformed curve on the right."""

from __future__ import annotations

from xml.sax.saxutils import escape

import numpy as np

from .mapping import DeformationJob, boundary_offset_curve, deform
from .scene import Scene

PANEL = 360.0
MARGIN = 28.0
GAP = 40.0

_STYLE = {
    "cage": 'fill="none" stroke="#1f4e8c" stroke-width="2"',
    "curve": 'fill="none" stroke="#c03024" stroke-width="1.5"',
}


class _Panel:
    """Maps model coordinates into one SVG viewport (y flipped)."""

    def __init__(self, points: np.ndarray, x_offset: float):
        lo = points.min(axis=0)
        hi = points.max(axis=0)
        span = np.maximum(hi - lo, 1e-12)
        self.scale = (PANEL - 2 * MARGIN) / span.max()
        self.lo = lo
        self.x_offset = x_offset
        # center the drawing inside the panel
        used = span * self.scale
        self.pad = (np.array([PANEL, PANEL]) - used) / 2.0

    def to_svg(self, pts: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(pts)
        x = self.x_offset + self.pad[0] + (pts[:, 0] - self.lo[0]) * self.scale
        y = PANEL - self.pad[1] - (pts[:, 1] - self.lo[1]) * self.scale
        return np.column_stack((x, y))


def _path(points: np.ndarray, closed: bool, style: str) -> str:
    coords = " L ".join(f"{p[0]:.3f},{p[1]:.3f}" for p in points)
    tail = " Z" if closed else ""
    return f'<path d="M {coords}{tail}" {style}/>'


def _labels(panel: _Panel, vertices: np.ndarray) -> list[str]:
    out = []
    centroid = vertices.mean(axis=0)
    for i, v in enumerate(vertices):
        away = v - centroid
        norm = np.hypot(*away)
        away = away / norm if norm > 0 else np.array([1.0, 0.0])
        pos = panel.to_svg(v)[0] + away * 14.0 * np.array([1.0, -1.0])
        out.append(
            f'<text x="{pos[0]:.1f}" y="{pos[1]:.1f}" font-size="12" '
            f'text-anchor="middle" dominant-baseline="middle" '
            f'fill="#333">{escape(str(i + 1))}</text>'
        )
    return out


def _markers(panel: _Panel, vertices: np.ndarray) -> list[str]:
    return [
        f'<circle cx="{p[0]:.2f}" cy="{p[1]:.2f}" r="3" fill="#1f4e8c"/>'
        for p in panel.to_svg(vertices)
    ]


def default_payload_curve(scene: Scene, samples: int = 512) -> np.ndarray:
    """Fallback payload: the boundary-offset curve of the source cage."""
    return boundary_offset_curve(scene.source, offset_scale=0.05, samples=samples)


def render_figure(scene: Scene) -> str:
    """Render a scene as a standalone SVG string.

    Emits exactly one path per cage and per curve; the deformed-curve path
    has one node per payload sample."""
    payload = scene.payload
    if payload is None:
        payload = default_payload_curve(scene)
    job = DeformationJob(scene.pair, payload, kind="polyline")
    image = deform(job, kind=scene.options.coordinate_kind)

    left = _Panel(np.vstack((scene.source.vertices, payload)), 0.0)
    right = _Panel(np.vstack((scene.target.vertices, image)), PANEL + GAP)

    width = 2 * PANEL + GAP
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" '
        f'height="{PANEL:.0f}" viewBox="0 0 {width:.0f} {PANEL:.0f}">',
        f'<rect width="{width:.0f}" height="{PANEL:.0f}" fill="white"/>',
        _path(left.to_svg(scene.source.vertices), True, _STYLE["cage"]),
        _path(left.to_svg(payload), True, _STYLE["curve"]),
        *_markers(left, scene.source.vertices),
        *_labels(left, scene.source.vertices),
        _path(right.to_svg(scene.target.vertices), True, _STYLE["cage"]),
        _path(right.to_svg(image), True, _STYLE["curve"]),
        *_markers(right, scene.target.vertices),
        *_labels(right, scene.target.vertices),
        "</svg>",
    ]
    return "\n".join(parts) + "\n"


def write_figure(scene: Scene, path) -> None:
    with open(path, "w") as fh:
        fh.write(render_figure(scene))
