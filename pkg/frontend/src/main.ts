import { RefreshResult, ServiceClient } from "./client";
import { parseScene, serializeScene } from "./scene";
import { EditorState, Handle } from "./state";
import {
  HANDLE_RADIUS,
  RenderData,
  Viewport,
  badgeText,
  renderSourcePanel,
  renderTargetPanel,
} from "./render";
import { SceneFile, Vec2 } from "./types";

const DEFAULT_PORT = 8787;

const startScene: SceneFile = {
  source_polygon: [
    [0, 0],
    [2, 0],
    [2, 2],
    [0, 2],
  ] as Vec2[],
  target_polygon: [
    [0, 0],
    [2, 0],
    [2, 2],
    [0, 2],
  ] as Vec2[],
  payload: circle([1, 1], 0.6, 96) as Vec2[] | null,
};

function circle(center: Vec2, radius: number, samples: number): Vec2[] {
  const pts: Vec2[] = [];
  for (let k = 0; k < samples; k++) {
    const a = (2 * Math.PI * k) / samples;
    pts.push([
      center[0] + radius * Math.cos(a),
      center[1] + radius * Math.sin(a),
    ]);
  }
  return pts;
}

function element<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
}

function main(): void {
  const sourceCanvas = element<HTMLCanvasElement>("source-canvas");
  const targetCanvas = element<HTMLCanvasElement>("target-canvas");
  const badge = element<HTMLSpanElement>("badge");
  const loadInput = element<HTMLInputElement>("load-input");
  const saveButton = element<HTMLButtonElement>("save-button");

  const params = new URLSearchParams(window.location.search);
  const port = params.get("port") ?? String(DEFAULT_PORT);
  const client = new ServiceClient(`http://127.0.0.1:${port}`);

  const fallbackPayload = circle([1, 1], 0.6, 96);
  let state = EditorState.fromScene(startScene, fallbackPayload);
  const sourceView = new Viewport();
  const targetView = new Viewport();
  const data: RenderData = { image: null, field: null, witness: null };

  function redraw(): void {
    const sctx = sourceCanvas.getContext("2d");
    const tctx = targetCanvas.getContext("2d");
    if (!sctx || !tctx) return;
    renderSourcePanel(sctx, sourceView, state, data);
    renderTargetPanel(tctx, targetView, state, data);
    const { text, cssClass } = badgeText(state.badge);
    badge.textContent = text;
    badge.className = cssClass;
  }

  function requestRefresh(immediate: boolean): void {
    const invalid = state.invalidCage();
    if (invalid) {
      state.badge = { kind: "invalid-cage", which: invalid };
      redraw();
      return; // requests suppressed while a cage self-intersects
    }
    state.badge = { kind: "pending" };
    state.pendingRequest = true;
    const req = {
      source: state.source,
      target: state.target,
      payload: state.payload,
      resolution: state.heatmapResolution,
    };
    if (immediate) client.refreshNow(req);
    else client.scheduleRefresh(req);
    redraw();
  }

  client.onResult((result: RefreshResult) => {
    state.pendingRequest = false;
    state.lastReport = result.report;
    state.badge = { kind: "verdict", report: result.report };
    data.image = result.image;
    data.field = result.field;
    data.witness =
      result.report.verdict === "non-injective"
        ? result.report.argmin_location
        : null;
    redraw();
  });
  client.onError(() => {
    state.pendingRequest = false;
    state.badge = { kind: "pending" };
    badge.textContent = "service unreachable — run `mvcage serve`";
    badge.className = "badge invalid";
  });

  function pickHandle(canvas: HTMLCanvasElement, view: Viewport, kinds: Handle["kind"][], pos: Vec2): Handle | null {
    for (const kind of kinds) {
      const pts = state.points(kind);
      for (let i = 0; i < pts.length; i++) {
        const [cx, cy] = view.toCanvas(pts[i]);
        if (Math.hypot(cx - pos[0], cy - pos[1]) <= HANDLE_RADIUS + 3) {
          return { kind, index: i };
        }
      }
    }
    return null;
  }

  function canvasPos(canvas: HTMLCanvasElement, ev: MouseEvent): Vec2 {
    const rect = canvas.getBoundingClientRect();
    return [ev.clientX - rect.left, ev.clientY - rect.top];
  }

  function attachDrag(canvas: HTMLCanvasElement, view: Viewport, kinds: Handle["kind"][]): void {
    canvas.addEventListener("mousedown", (ev) => {
      const handle = pickHandle(canvas, view, kinds, canvasPos(canvas, ev));
      if (handle) {
        state.beginDrag(handle);
        redraw();
      }
    });
    canvas.addEventListener("mousemove", (ev) => {
      if (!state.dragging || !state.selected) return;
      const model = view.toModel(canvasPos(canvas, ev));
      if (state.moveSelected(model)) {
        requestRefresh(false);
      }
    });
    window.addEventListener("mouseup", () => {
      if (!state.dragging) return;
      state.endDrag();
      requestRefresh(true); // full-resolution heatmap on release
    });
  }

  attachDrag(sourceCanvas, sourceView, ["source", "payload"]);
  attachDrag(targetCanvas, targetView, ["target"]);

  saveButton.addEventListener("click", () => {
    const blob = new Blob([serializeScene(state.toScene())], {
      type: "application/json",
    });
    const link = document.createElement("a");
    link.href = URL.createObjectURL(blob);
    link.download = "scene.json";
    link.click();
    URL.revokeObjectURL(link.href);
  });

  loadInput.addEventListener("change", async () => {
    const file = loadInput.files?.[0];
    if (!file) return;
    try {
      const scene = parseScene(await file.text());
      state = EditorState.fromScene(scene, fallbackPayload);
      data.image = null;
      data.field = null;
      data.witness = null;
      requestRefresh(true);
    } catch (err) {
      badge.textContent = `scene error: ${(err as Error).message}`;
      badge.className = "badge invalid";
    }
  });

  requestRefresh(true);
}

main();
