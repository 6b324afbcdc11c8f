import { BadgeState, EditorState, Handle } from "./state";
import { FieldResponse, Vec2 } from "./types";
import { rasterize } from "./heatmap";

export const HANDLE_RADIUS = 6;

/** Affine model-to-canvas transform (y flipped), fitted per panel. */
export class Viewport {
  scale = 1;
  offsetX = 0;
  offsetY = 0;

  fit(points: Vec2[], width: number, height: number, margin = 30): void {
    let xmin = Infinity, ymin = Infinity, xmax = -Infinity, ymax = -Infinity;
    for (const [x, y] of points) {
      xmin = Math.min(xmin, x);
      ymin = Math.min(ymin, y);
      xmax = Math.max(xmax, x);
      ymax = Math.max(ymax, y);
    }
    const spanX = Math.max(xmax - xmin, 1e-12);
    const spanY = Math.max(ymax - ymin, 1e-12);
    this.scale = Math.min((width - 2 * margin) / spanX, (height - 2 * margin) / spanY);
    this.offsetX = (width - spanX * this.scale) / 2 - xmin * this.scale;
    this.offsetY = height - ((height - spanY * this.scale) / 2 - ymin * this.scale);
  }

  toCanvas([x, y]: Vec2): Vec2 {
    return [x * this.scale + this.offsetX, this.offsetY - y * this.scale];
  }

  toModel([cx, cy]: Vec2): Vec2 {
    return [(cx - this.offsetX) / this.scale, (this.offsetY - cy) / this.scale];
  }
}

function drawPolygon(
  ctx: CanvasRenderingContext2D,
  view: Viewport,
  pts: Vec2[],
  stroke: string,
  close = true,
): void {
  if (pts.length === 0) return;
  ctx.beginPath();
  const [x0, y0] = view.toCanvas(pts[0]);
  ctx.moveTo(x0, y0);
  for (let i = 1; i < pts.length; i++) {
    const [x, y] = view.toCanvas(pts[i]);
    ctx.lineTo(x, y);
  }
  if (close) ctx.closePath();
  ctx.strokeStyle = stroke;
  ctx.lineWidth = 2;
  ctx.stroke();
}

function drawHandles(
  ctx: CanvasRenderingContext2D,
  view: Viewport,
  pts: Vec2[],
  fill: string,
  selected: Handle | null,
  kind: Handle["kind"],
): void {
  pts.forEach((p, i) => {
    const [x, y] = view.toCanvas(p);
    ctx.beginPath();
    ctx.arc(x, y, HANDLE_RADIUS, 0, 2 * Math.PI);
    ctx.fillStyle =
      selected && selected.kind === kind && selected.index === i ? "#f5a623" : fill;
    ctx.fill();
    ctx.fillStyle = "#333";
    ctx.font = "11px sans-serif";
    ctx.fillText(String(i + 1), x + 8, y - 8);
  });
}

function drawHeatmap(
  ctx: CanvasRenderingContext2D,
  view: Viewport,
  field: FieldResponse,
): void {
  const { pixels, rows, cols } = rasterize(field);
  if (rows === 0 || cols === 0) return;
  const image = new ImageData(pixels, cols, rows);
  const off = new OffscreenCanvas(cols, rows);
  const offCtx = off.getContext("2d");
  if (!offCtx) return;
  offCtx.putImageData(image, 0, 0);
  const [xmin, ymin, xmax, ymax] = field.bbox;
  const topLeft = view.toCanvas([xmin, ymax]);
  const bottomRight = view.toCanvas([xmax, ymin]);
  ctx.save();
  ctx.imageSmoothingEnabled = false;
  // grid row 0 is the bottom of the bbox: flip vertically
  ctx.translate(topLeft[0], bottomRight[1]);
  ctx.scale(1, -1);
  ctx.drawImage(
    off,
    0,
    0,
    bottomRight[0] - topLeft[0],
    bottomRight[1] - topLeft[1],
  );
  ctx.restore();
}

export interface RenderData {
  image: Vec2[] | null;
  field: FieldResponse | null;
  witness: Vec2 | null;
}

export function renderSourcePanel(
  ctx: CanvasRenderingContext2D,
  view: Viewport,
  state: EditorState,
  data: RenderData,
): void {
  ctx.clearRect(0, 0, ctx.canvas.width, ctx.canvas.height);
  view.fit(
    state.source.concat(state.payload),
    ctx.canvas.width,
    ctx.canvas.height,
  );
  if (data.field) drawHeatmap(ctx, view, data.field);
  drawPolygon(ctx, view, state.source, "#1f4e8c");
  drawPolygon(ctx, view, state.payload, "#c03024");
  if (data.witness) {
    const [x, y] = view.toCanvas(data.witness);
    ctx.beginPath();
    ctx.arc(x, y, 7, 0, 2 * Math.PI);
    ctx.strokeStyle = "#d40000";
    ctx.lineWidth = 3;
    ctx.stroke();
  }
  drawHandles(ctx, view, state.source, "#1f4e8c", state.selected, "source");
  drawHandles(ctx, view, state.payload, "#c03024", state.selected, "payload");
}

export function renderTargetPanel(
  ctx: CanvasRenderingContext2D,
  view: Viewport,
  state: EditorState,
  data: RenderData,
): void {
  ctx.clearRect(0, 0, ctx.canvas.width, ctx.canvas.height);
  const extent = data.image
    ? state.target.concat(data.image)
    : state.target;
  view.fit(extent, ctx.canvas.width, ctx.canvas.height);
  drawPolygon(ctx, view, state.target, "#1f4e8c");
  if (data.image) drawPolygon(ctx, view, data.image, "#c03024");
  drawHandles(ctx, view, state.target, "#1f4e8c", state.selected, "target");
}

export function badgeText(badge: BadgeState): { text: string; cssClass: string } {
  switch (badge.kind) {
    case "pending":
      return { text: "checking…", cssClass: "badge pending" };
    case "invalid-cage":
      return { text: `invalid ${badge.which} cage`, cssClass: "badge invalid" };
    case "verdict": {
      const r = badge.report;
      if (r.verdict === "injective-evidence") {
        return {
          text: `injective-evidence (min J = ${fmt(r.min_jacobian)})`,
          cssClass: "badge ok",
        };
      }
      if (r.verdict === "non-injective") {
        return {
          text:
            `non-injective — ${r.negative_sample_count} negative samples` +
            (r.self_intersection_pairs.length
              ? `, ${r.self_intersection_pairs.length} curve crossings`
              : ""),
          cssClass: "badge bad",
        };
      }
      return { text: "inconclusive", cssClass: "badge pending" };
    }
  }
}

function fmt(v: number | null): string {
  return v === null ? "n/a" : v.toPrecision(3);
}
