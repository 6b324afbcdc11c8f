import { describe, expect, it } from "vitest";

import { parseScene, serializeScene } from "../src/scene";
import { SceneFile, Vec2 } from "../src/types";

const awkward = [0.1 + 0.2, 1 / 3, Math.PI, 5e-324, 1.7976931348623157e308];

describe("scene round trip", () => {
  it("is bit-exact on vertex coordinates", () => {
    const scene: SceneFile = {
      source_polygon: [
        [awkward[0], awkward[1]],
        [awkward[2], 0],
        [awkward[3], awkward[4]],
      ],
      target_polygon: [
        [0, 0],
        [1, 0],
        [0.5, 1],
      ],
      payload: [[0.4999999999999999, 0.5000000000000001]],
    };
    const back = parseScene(serializeScene(scene));
    expect(back.source_polygon).toEqual(scene.source_polygon);
    expect(back.target_polygon).toEqual(scene.target_polygon);
    expect(back.payload).toEqual(scene.payload);
    // double round trip is a fixed point
    expect(serializeScene(back)).toBe(serializeScene(parseScene(serializeScene(back))));
  });

  it("accepts the backend's file layout", () => {
    const text = JSON.stringify({
      source_polygon: [
        [0, 0],
        [1, 0],
        [1, 1],
        [0, 1],
      ],
      target_polygon: [
        [0, 0],
        [2, 0],
        [2, 2],
        [0, 2],
      ],
      payload: null,
      options: { resolution: [200, 200], tolerance: null, coordinate_kind: "mv" },
    });
    const scene = parseScene(text);
    expect(scene.payload).toBeNull();
    expect(scene.options?.coordinate_kind).toBe("mv");
  });

  it("rejects mismatched cage sizes", () => {
    expect(() =>
      parseScene(
        JSON.stringify({
          source_polygon: [
            [0, 0],
            [1, 0],
            [1, 1],
            [0, 1],
          ],
          target_polygon: [
            [0, 0],
            [1, 0],
            [1, 1],
          ],
          payload: null,
        }),
      ),
    ).toThrow(/equal vertex counts/);
  });

  it("rejects malformed vertices", () => {
    expect(() =>
      parseScene(
        JSON.stringify({
          source_polygon: [[0, 0], [1], [1, 1]],
          target_polygon: [
            [0, 0],
            [1, 0],
            [1, 1],
          ],
          payload: null,
        }),
      ),
    ).toThrow(/\[x, y\]/);
  });
});

function roundTripNumbers(values: number[]): void {
  for (const v of values) {
    expect(JSON.parse(JSON.stringify(v))).toBe(v);
  }
}

describe("number fidelity", () => {
  it("JSON round-trips doubles exactly", () => {
    roundTripNumbers(awkward as Vec2[number][]);
  });
});
