import { SceneFile, Vec2 } from "./types";

/**
 * Parse scene JSON. JSON numbers are IEEE doubles and JSON.stringify emits
 * shortest round-trip decimals, so save-then-load is bit-exact on vertex
 * coordinates.
 */
export function parseScene(text: string): SceneFile {
  const data = JSON.parse(text);
  const source = vertexList(data.source_polygon, "source_polygon");
  const target = vertexList(data.target_polygon, "target_polygon");
  if (source.length !== target.length) {
    throw new Error(
      `cages must have equal vertex counts (${source.length} != ${target.length})`,
    );
  }
  let payload: Vec2[] | null = null;
  if (data.payload != null) {
    payload = vertexList(data.payload, "payload", 1);
  }
  const scene: SceneFile = {
    source_polygon: source,
    target_polygon: target,
    payload,
  };
  if (data.options && typeof data.options === "object") {
    scene.options = {
      resolution: data.options.resolution ?? null,
      tolerance: data.options.tolerance ?? null,
      coordinate_kind: data.options.coordinate_kind ?? "mv",
    };
  }
  return scene;
}

export function serializeScene(scene: SceneFile): string {
  return JSON.stringify(
    {
      source_polygon: scene.source_polygon,
      target_polygon: scene.target_polygon,
      payload: scene.payload,
      options: scene.options ?? {
        resolution: null,
        tolerance: null,
        coordinate_kind: "mv",
      },
    },
    null,
    2,
  );
}

function vertexList(raw: unknown, name: string, minLength = 3): Vec2[] {
  if (!Array.isArray(raw) || raw.length < minLength) {
    throw new Error(`${name} must be a list of at least ${minLength} [x, y] pairs`);
  }
  return raw.map((row, i) => {
    if (
      !Array.isArray(row) ||
      row.length !== 2 ||
      typeof row[0] !== "number" ||
      typeof row[1] !== "number" ||
      !Number.isFinite(row[0]) ||
      !Number.isFinite(row[1])
    ) {
      throw new Error(`${name}[${i}] must be a finite [x, y] pair`);
    }
    return [row[0], row[1]];
  });
}
