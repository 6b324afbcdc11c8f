import { describe, expect, it } from "vitest";

import { colorFor, gridExtents, rasterize } from "../src/heatmap";

describe("diverging heatmap scale", () => {
  it("is white at zero", () => {
    const c = colorFor(0, 1, 1);
    expect([c.r, c.g, c.b]).toEqual([255, 255, 255]);
    expect(c.a).toBeGreaterThan(0);
  });

  it("negative values go red, positive go blue", () => {
    const neg = colorFor(-1, 1, 1);
    expect(neg.r).toBe(255);
    expect(neg.g).toBeLessThan(255);
    const pos = colorFor(1, 1, 1);
    expect(pos.b).toBe(255);
    expect(pos.r).toBeLessThan(255);
  });

  it("absent samples are transparent", () => {
    expect(colorFor(null, 1, 1).a).toBe(0);
  });

  it("extents split by sign", () => {
    expect(gridExtents([[-2, null, 0.5], [3, 1, null]])).toEqual({ lo: 2, hi: 3 });
  });

  it("rasterizes row-major with transparent holes", () => {
    const { pixels, rows, cols } = rasterize({
      grid: [
        [1, null],
        [-1, 0],
      ],
      bbox: [0, 0, 1, 1],
      min: -1,
      argmin: [0, 0],
    });
    expect(rows).toBe(2);
    expect(cols).toBe(2);
    expect(pixels[3]).toBeGreaterThan(0); // (0,0) present
    expect(pixels[7]).toBe(0); // (0,1) absent -> alpha 0
    expect(pixels[8]).toBe(255); // (1,0) negative -> full red channel
  });
});
