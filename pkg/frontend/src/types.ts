export type Vec2 = [number, number];

/** Scene file format shared with the CLI (see the backend README). */
export interface SceneFile {
  source_polygon: Vec2[];
  target_polygon: Vec2[];
  payload: Vec2[] | null;
  options?: {
    resolution?: [number, number] | null;
    tolerance?: number | null;
    coordinate_kind?: "mv" | "wachspress";
  };
}

export interface InjectivityReport {
  verdict: "injective-evidence" | "non-injective" | "inconclusive";
  min_jacobian: number | null;
  argmin_location: Vec2 | null;
  negative_sample_count: number;
  self_intersection_pairs: [number, number][];
  samples: number;
  resolution: [number, number];
}

export interface FieldResponse {
  grid: (number | null)[][];
  bbox: [number, number, number, number];
  min: number | null;
  argmin: Vec2 | null;
}

export interface MapResponse {
  points: Vec2[];
}

export interface ServiceError {
  error: { type: string; message: string };
}

export function isServiceError(body: unknown): body is ServiceError {
  return typeof body === "object" && body !== null && "error" in body;
}
