/**
 * Blob view geometry: character-class groups as draggable discs whose
 * pairwise distances define substitution weights.
 *
 * The induced weight matrix is symmetric by construction:
 *   sub(i, j)  = scale * distance(center_i, center_j)
 *   sub(i, i)  = scale * radius_i          (within-class substitutions)
 *   indel(i)   = scale * distance(center_i, indel blob center)
 *
 * The reverse direction (matrix -> layout) only exists when the weights
 * admit an exact planar realization; a full n-class matrix generally needs
 * n-1 dimensions, so `weightsToLayout` returns null in that case and the
 * UI states the limitation instead of silently distorting weights.
 */

export interface Point {
  x: number;
  y: number;
}

export interface ClassBlob {
  name: string;
  center: Point;
  radius: number;
}

export interface BlobLayout {
  blobs: ClassBlob[];
  indelCenter: Point;
  /** weight units per canvas distance unit; only ratios matter downstream */
  scale: number;
}

export interface InducedWeights {
  classes: string[];
  indel: number[];
  sub: number[][];
}

const dist = (a: Point, b: Point): number => Math.hypot(a.x - b.x, a.y - b.y);

export function layoutToWeights(layout: BlobLayout): InducedWeights {
  const { blobs, indelCenter, scale } = layout;
  const n = blobs.length;
  const sub: number[][] = [];
  for (let i = 0; i < n; i++) {
    const row: number[] = [];
    for (let j = 0; j < n; j++) {
      row.push(i === j ? scale * blobs[i].radius : scale * dist(blobs[i].center, blobs[j].center));
    }
    sub.push(row);
  }
  return {
    classes: blobs.map((b) => b.name),
    indel: blobs.map((b) => scale * dist(b.center, indelCenter)),
    sub,
  };
}

/** Relative tolerance for "these weights are exactly planar". */
export const REALIZATION_TOLERANCE = 1e-6;

function close(a: number, b: number): boolean {
  return Math.abs(a - b) <= REALIZATION_TOLERANCE * Math.max(1, Math.abs(a), Math.abs(b));
}

/**
 * Try to place points in the plane reproducing the given distance matrix
 * exactly: two anchors fix the axes, every further point is trilaterated
 * from them, and the full matrix is verified afterwards.  Returns null when
 * no exact planar realization exists.
 */
function embedExactly(d: number[][]): Point[] | null {
  const n = d.length;
  const points: (Point | null)[] = new Array(n).fill(null);
  if (n === 0) return [];
  points[0] = { x: 0, y: 0 };

  let axis = -1;
  for (let k = 1; k < n; k++) {
    if (d[0][k] > 0) {
      axis = k;
      break;
    }
  }
  if (axis === -1) {
    // everything is at distance zero from point 0: all coincide
    const all = Array.from({ length: n }, () => ({ x: 0, y: 0 }));
    return verify(all, d) ? all : null;
  }
  points[axis] = { x: d[0][axis], y: 0 };

  let offAxis = -1; // first point placed with |y| > 0, used to fix signs
  for (let k = 1; k < n; k++) {
    if (k === axis) continue;
    const r0 = d[0][k];
    const r1 = d[axis][k];
    const base = d[0][axis];
    const x = (r0 * r0 - r1 * r1 + base * base) / (2 * base);
    const ySquared = r0 * r0 - x * x;
    if (ySquared < -REALIZATION_TOLERANCE * Math.max(1, r0 * r0)) return null;
    const y = Math.sqrt(Math.max(0, ySquared));

    let chosen: Point = { x, y };
    if (y > 0 && offAxis !== -1) {
      const ref = points[offAxis]!;
      const plus = Math.abs(dist({ x, y }, ref) - d[offAxis][k]);
      const minus = Math.abs(dist({ x, y: -y }, ref) - d[offAxis][k]);
      if (minus < plus) chosen = { x, y: -y };
    }
    points[k] = chosen;
    if (offAxis === -1 && Math.abs(chosen.y) > 0) offAxis = k;
  }

  const placed = points as Point[];
  return verify(placed, d) ? placed : null;
}

function verify(points: Point[], d: number[][]): boolean {
  for (let i = 0; i < points.length; i++) {
    for (let j = i + 1; j < points.length; j++) {
      if (!close(dist(points[i], points[j]), d[i][j])) return false;
    }
  }
  return true;
}

/**
 * Invert the induced-weights mapping when an exact 2D realization exists.
 * The indel blob participates as an extra point whose distances are the
 * indel weights.
 */
export function weightsToLayout(weights: InducedWeights, scale: number): BlobLayout | null {
  if (scale <= 0) return null;
  const n = weights.classes.length;
  // point 0 is the indel blob, points 1..n the classes
  const d: number[][] = Array.from({ length: n + 1 }, () => new Array(n + 1).fill(0));
  for (let i = 0; i < n; i++) {
    d[0][i + 1] = d[i + 1][0] = weights.indel[i] / scale;
    for (let j = 0; j < n; j++) {
      if (i !== j) d[i + 1][j + 1] = weights.sub[i][j] / scale;
    }
  }
  const points = embedExactly(d);
  if (points === null) return null;
  return {
    blobs: weights.classes.map((name, i) => ({
      name,
      center: points[i + 1],
      radius: weights.sub[i][i] / scale,
    })),
    indelCenter: points[0],
    scale,
  };
}

/** Human-readable reason shown when the matrix view cannot become a blob view. */
export const REALIZATION_LIMIT_MESSAGE =
  "These weights have no exact 2D arrangement; the blob view would distort " +
  "them (a full matrix over n classes generally needs n-1 dimensions). " +
  "Keep editing in the matrix view.";
