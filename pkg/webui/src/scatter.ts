/**
 * Scatter plot helpers.  The embedding itself comes from the service and is
 * never recomputed here; the only client-side geometry is a deterministic
 * jitter that fans out exactly coincident points so their labels stay
 * readable.  Jitter is presentation only and never fed back anywhere.
 */

export interface ScatterPoint {
  x: number;
  y: number;
  cluster: number;
  color: number;
  abstracted: string;
  label: string;
  count: number;
}

export interface PlacedPoint extends ScatterPoint {
  plotX: number;
  plotY: number;
}

/**
 * Spread groups of exactly coincident points evenly on a small circle, in
 * input order; points with a unique position are left untouched.
 */
export function jitterCoincident(points: ScatterPoint[], radius: number): PlacedPoint[] {
  const byPosition = new Map<string, number[]>();
  points.forEach((p, idx) => {
    const key = `${p.x}|${p.y}`;
    const group = byPosition.get(key);
    if (group) group.push(idx);
    else byPosition.set(key, [idx]);
  });

  const placed: PlacedPoint[] = points.map((p) => ({ ...p, plotX: p.x, plotY: p.y }));
  for (const group of byPosition.values()) {
    if (group.length < 2) continue;
    group.forEach((idx, position) => {
      const angle = (2 * Math.PI * position) / group.length;
      placed[idx].plotX += radius * Math.cos(angle);
      placed[idx].plotY += radius * Math.sin(angle);
    });
  }
  return placed;
}

const PALETTE = [
  "#4269d0", "#efb118", "#ff725c", "#6cc5b0", "#3ca951",
  "#ff8ab7", "#a463f2", "#97bbf5", "#9c6b4e", "#9498a0",
];

export const NOISE_COLOR = "#c7c7c7";

/** Stable cluster color; the reserved noise index maps to gray. */
export function colorFor(colorIndex: number, k: number): string {
  if (colorIndex >= k) return NOISE_COLOR;
  return PALETTE[colorIndex % PALETTE.length];
}

export interface ViewBox {
  minX: number;
  minY: number;
  width: number;
  height: number;
}

/** Data-space bounding box with a relative margin; degenerate extents get padding. */
export function viewBoxFor(points: PlacedPoint[], margin = 0.1): ViewBox {
  if (points.length === 0) return { minX: -1, minY: -1, width: 2, height: 2 };
  let minX = Infinity, maxX = -Infinity, minY = Infinity, maxY = -Infinity;
  for (const p of points) {
    minX = Math.min(minX, p.plotX);
    maxX = Math.max(maxX, p.plotX);
    minY = Math.min(minY, p.plotY);
    maxY = Math.max(maxY, p.plotY);
  }
  const spanX = maxX - minX || 1;
  const spanY = maxY - minY || 1;
  return {
    minX: minX - margin * spanX,
    minY: minY - margin * spanY,
    width: spanX * (1 + 2 * margin),
    height: spanY * (1 + 2 * margin),
  };
}
