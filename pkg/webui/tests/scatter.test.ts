import { describe, expect, it } from "vitest";

import { NOISE_COLOR, colorFor, jitterCoincident, viewBoxFor, type ScatterPoint } from "../src/scatter.js";

function point(x: number, y: number, cluster = 0): ScatterPoint {
  return { x, y, cluster, color: cluster === -1 ? 99 : cluster, abstracted: "v", label: "v", count: 1 };
}

describe("coincident-point jitter", () => {
  it("leaves uniquely placed points untouched", () => {
    const placed = jitterCoincident([point(0, 0), point(1, 2), point(-3, 4)], 0.1);
    for (const p of placed) {
      expect(p.plotX).toBe(p.x);
      expect(p.plotY).toBe(p.y);
    }
  });

  it("fans out exactly coincident points on a circle of the given radius", () => {
    const placed = jitterCoincident([point(1, 1), point(1, 1), point(1, 1), point(5, 5)], 0.5);
    const moved = placed.slice(0, 3);
    for (const p of moved) {
      expect(Math.hypot(p.plotX - 1, p.plotY - 1)).toBeCloseTo(0.5, 12);
    }
    const distinct = new Set(moved.map((p) => `${p.plotX}|${p.plotY}`));
    expect(distinct.size).toBe(3);
    expect(placed[3].plotX).toBe(5);
  });

  it("is deterministic and preserves the data coordinates", () => {
    const points = [point(0, 0), point(0, 0)];
    const a = jitterCoincident(points, 0.25);
    const b = jitterCoincident(points, 0.25);
    expect(a).toEqual(b);
    expect(a[0].x).toBe(0); // original coordinates untouched
  });
});

describe("cluster colors", () => {
  it("reserves a distinct color for noise", () => {
    const k = 4;
    const clusterColors = Array.from({ length: k }, (_, i) => colorFor(i, k));
    expect(colorFor(k, k)).toBe(NOISE_COLOR);
    expect(clusterColors).not.toContain(NOISE_COLOR);
  });

  it("is stable per cluster index", () => {
    expect(colorFor(2, 10)).toBe(colorFor(2, 10));
  });
});

describe("view box", () => {
  it("pads degenerate extents", () => {
    const box = viewBoxFor(jitterCoincident([point(3, 3)], 0));
    expect(box.width).toBeGreaterThan(0);
    expect(box.height).toBeGreaterThan(0);
  });
});
