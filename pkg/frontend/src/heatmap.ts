import { FieldResponse } from "./types";

export interface Rgba {
  r: number;
  g: number;
  b: number;
  a: number;
}

/**
 * Diverging color scale centered at J = 0: negative values blend white to
 * red, positive values white to blue; absent samples are transparent.
 * The positive side is normalized by the grid's own maximum so that near-1
 * Jacobians stay readable, the negative side by |min|.
 */
export function colorFor(value: number | null, lo: number, hi: number): Rgba {
  if (value === null || Number.isNaN(value)) {
    return { r: 0, g: 0, b: 0, a: 0 };
  }
  if (value < 0) {
    const t = Math.min(1, lo > 0 ? -value / lo : 1);
    return {
      r: 255,
      g: Math.round(255 * (1 - 0.8 * t)),
      b: Math.round(255 * (1 - 0.8 * t)),
      a: 210,
    };
  }
  const t = Math.min(1, hi > 0 ? value / hi : 0);
  return {
    r: Math.round(255 * (1 - 0.65 * t)),
    g: Math.round(255 * (1 - 0.45 * t)),
    b: 255,
    a: 160,
  };
}

export function gridExtents(grid: (number | null)[][]): { lo: number; hi: number } {
  let lo = 0;
  let hi = 0;
  for (const row of grid) {
    for (const v of row) {
      if (v === null) continue;
      if (v < 0) lo = Math.max(lo, -v);
      else hi = Math.max(hi, v);
    }
  }
  return { lo, hi };
}

/** Rasterize a field response into an RGBA pixel buffer (row-major). */
export function rasterize(field: FieldResponse): {
  pixels: Uint8ClampedArray<ArrayBuffer>;
  rows: number;
  cols: number;
} {
  const grid = field.grid;
  const rows = grid.length;
  const cols = rows > 0 ? grid[0].length : 0;
  const { lo, hi } = gridExtents(grid);
  const pixels = new Uint8ClampedArray(new ArrayBuffer(rows * cols * 4));
  for (let i = 0; i < rows; i++) {
    for (let j = 0; j < cols; j++) {
      const { r, g, b, a } = colorFor(grid[i][j], lo, hi);
      const k = (i * cols + j) * 4;
      pixels[k] = r;
      pixels[k + 1] = g;
      pixels[k + 2] = b;
      pixels[k + 3] = a;
    }
  }
  return { pixels, rows, cols };
}
