import { InjectivityReport, SceneFile, Vec2 } from "./types";

export type CageName = "source" | "target";

export interface Handle {
  kind: CageName | "payload";
  index: number;
}

export type BadgeState =
  | { kind: "pending" }
  | { kind: "invalid-cage"; which: CageName }
  | { kind: "verdict"; report: InjectivityReport };

const DRAG_HEATMAP_RES: [number, number] = [64, 64];
const RELEASE_HEATMAP_RES: [number, number] = [200, 200];

/**
 * All mutable editor data. The cages always keep equal vertex counts, and a
 * drag that would collapse a vertex onto one of its cyclic neighbours is
 * clamped (the update is dropped).
 *
 * The state never computes verdicts itself; `badge` only ever holds what the
 * service said (or that a request is pending / suppressed).
 */
export class EditorState {
  source: Vec2[];
  target: Vec2[];
  payload: Vec2[];
  selected: Handle | null = null;
  dragging = false;
  heatmapResolution: [number, number] = RELEASE_HEATMAP_RES;
  lastReport: InjectivityReport | null = null;
  badge: BadgeState = { kind: "pending" };
  pendingRequest = false;

  constructor(source: Vec2[], target: Vec2[], payload: Vec2[]) {
    if (source.length !== target.length) {
      throw new Error("cages must have equal vertex counts");
    }
    this.source = source.map((p) => [...p] as Vec2);
    this.target = target.map((p) => [...p] as Vec2);
    this.payload = payload.map((p) => [...p] as Vec2);
  }

  static fromScene(scene: SceneFile, fallbackPayload: Vec2[]): EditorState {
    return new EditorState(
      scene.source_polygon,
      scene.target_polygon,
      scene.payload ?? fallbackPayload,
    );
  }

  toScene(): SceneFile {
    return {
      source_polygon: this.source.map((p) => [...p] as Vec2),
      target_polygon: this.target.map((p) => [...p] as Vec2),
      payload: this.payload.map((p) => [...p] as Vec2),
      options: { resolution: null, tolerance: null, coordinate_kind: "mv" },
    };
  }

  points(kind: Handle["kind"]): Vec2[] {
    if (kind === "source") return this.source;
    if (kind === "target") return this.target;
    return this.payload;
  }

  beginDrag(handle: Handle): void {
    this.selected = handle;
    this.dragging = true;
    this.heatmapResolution = DRAG_HEATMAP_RES;
  }

  /** Move the selected handle; returns false when the drop was clamped. */
  moveSelected(position: Vec2): boolean {
    if (!this.selected) return false;
    const pts = this.points(this.selected.kind);
    const i = this.selected.index;
    if (this.selected.kind !== "payload") {
      const n = pts.length;
      const minSep = 1e-9 * cageScale(pts);
      for (const j of [(i + 1) % n, (i - 1 + n) % n]) {
        if (dist(position, pts[j]) < minSep) {
          return false; // would create a repeated consecutive vertex
        }
      }
    }
    pts[i] = [...position] as Vec2;
    return true;
  }

  endDrag(): void {
    this.dragging = false;
    this.heatmapResolution = RELEASE_HEATMAP_RES;
  }

  /**
   * Quick local validity screen used only to suppress requests while a cage
   * is dragged through a self-intersecting configuration; verdicts always
   * come from the service.
   */
  invalidCage(): CageName | null {
    if (!cageIsSimple(this.source)) return "source";
    if (!cageIsSimple(this.target)) return "target";
    return null;
  }
}

function dist(a: Vec2, b: Vec2): number {
  return Math.hypot(a[0] - b[0], a[1] - b[1]);
}

function cageScale(pts: Vec2[]): number {
  let lo = [Infinity, Infinity];
  let hi = [-Infinity, -Infinity];
  for (const p of pts) {
    lo = [Math.min(lo[0], p[0]), Math.min(lo[1], p[1])];
    hi = [Math.max(hi[0], p[0]), Math.max(hi[1], p[1])];
  }
  return Math.max(hi[0] - lo[0], hi[1] - lo[1], 1e-300);
}

function orient(a: Vec2, b: Vec2, c: Vec2): number {
  return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
}

function properIntersect(a: Vec2, b: Vec2, c: Vec2, d: Vec2): boolean {
  const d1 = orient(c, d, a);
  const d2 = orient(c, d, b);
  const d3 = orient(a, b, c);
  const d4 = orient(a, b, d);
  return d1 * d2 < 0 && d3 * d4 < 0;
}

export function cageIsSimple(pts: Vec2[]): boolean {
  const n = pts.length;
  if (n < 3) return false;
  for (let i = 0; i < n; i++) {
    if (dist(pts[i], pts[(i + 1) % n]) === 0) return false;
  }
  for (let i = 0; i < n; i++) {
    for (let j = i + 1; j < n; j++) {
      if (j === i + 1 || (i === 0 && j === n - 1)) continue;
      if (
        properIntersect(
          pts[i],
          pts[(i + 1) % n],
          pts[j],
          pts[(j + 1) % n],
        )
      ) {
        return false;
      }
    }
  }
  return true;
}
