/**
 * Matrix view of the distance weights: the editable table mirrors the
 * published weight tables, with the first row and column holding the
 * insertion/deletion weights and the last class acting as the catch-all for
 * characters not listed before.  The matrix must be symmetric, so editing a
 * substitution cell writes its mirror cell too.
 */

export interface CharClassDef {
  name: string;
  /** explicit characters, or null for the trailing catch-all class */
  chars: string | null;
}

export interface MatrixState {
  kind: "basic" | "levenshtein";
  classes: CharClassDef[];
  indel: number[];
  /** null while editing a basic-distance (indel-only) matrix */
  sub: number[][] | null;
}

export function setIndel(state: MatrixState, i: number, value: number): MatrixState {
  if (value < 0) throw new Error("weights must be non-negative");
  const indel = state.indel.slice();
  indel[i] = value;
  return { ...state, indel };
}

/** Write one substitution weight; the mirror cell follows automatically. */
export function setSub(state: MatrixState, i: number, j: number, value: number): MatrixState {
  if (state.sub === null) throw new Error("basic-distance matrices have no substitution weights");
  if (value < 0) throw new Error("weights must be non-negative");
  const sub = state.sub.map((row) => row.slice());
  sub[i][j] = value;
  sub[j][i] = value;
  return { ...state, sub };
}

export function setKind(state: MatrixState, kind: "basic" | "levenshtein"): MatrixState {
  if (kind === state.kind) return state;
  if (kind === "basic") return { ...state, kind, sub: null };
  const n = state.classes.length;
  // seed substitutions with the indel sums, the starting point the basic
  // distance corresponds to; refine from there
  const sub = Array.from({ length: n }, (_, i) =>
    Array.from({ length: n }, (_, j) => state.indel[i] + state.indel[j])
  );
  return { ...state, kind, sub };
}

export function isSymmetric(state: MatrixState): boolean {
  if (state.sub === null) return true;
  for (let i = 0; i < state.sub.length; i++) {
    for (let j = 0; j < state.sub.length; j++) {
      if (state.sub[i][j] !== state.sub[j][i]) return false;
    }
  }
  return true;
}

/** Serialize to the exact distance config fragment the service accepts. */
export function toDistanceConfig(state: MatrixState): object {
  return {
    kind: state.kind,
    classes: state.classes.map((c) => ({ name: c.name, chars: c.chars })),
    indel: state.indel.slice(),
    sub: state.sub === null ? null : state.sub.map((row) => row.slice()),
  };
}

export function fromDistanceConfig(config: {
  kind: string;
  classes: { name: string; chars: string | null }[];
  indel: number[];
  sub: number[][] | null;
}): MatrixState {
  return {
    kind: config.kind === "basic" ? "basic" : "levenshtein",
    classes: config.classes.map((c) => ({ name: c.name, chars: c.chars ?? null })),
    indel: config.indel.slice(),
    sub: config.sub ? config.sub.map((row) => row.slice()) : null,
  };
}
