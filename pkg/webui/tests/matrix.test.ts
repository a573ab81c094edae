import { describe, expect, it } from "vitest";

import {
  fromDistanceConfig,
  isSymmetric,
  setIndel,
  setKind,
  setSub,
  toDistanceConfig,
  type MatrixState,
} from "../src/matrix.js";
import { validateAgainstSchema } from "./schema-helper.js";

function unitState(): MatrixState {
  return {
    kind: "levenshtein",
    classes: [
      { name: "Digits", chars: "0123456789" },
      { name: "Letters", chars: "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ" },
      { name: "Special", chars: null },
    ],
    indel: [2, 1, 2],
    sub: [
      [0, 3, 4],
      [3, 1, 3],
      [4, 3, 2],
    ],
  };
}

describe("matrix editor state", () => {
  it("editing a substitution cell fills the mirrored cell", () => {
    let state = unitState();
    state = setSub(state, 0, 1, 7);
    expect(state.sub![0][1]).toBe(7);
    expect(state.sub![1][0]).toBe(7);
    expect(isSymmetric(state)).toBe(true);
  });

  it("stays symmetric through arbitrary edit sequences", () => {
    let state = unitState();
    const edits: [number, number, number][] = [
      [2, 0, 9], [1, 2, 0.5], [0, 0, 6], [2, 1, 11],
    ];
    for (const [i, j, v] of edits) state = setSub(state, i, j, v);
    expect(isSymmetric(state)).toBe(true);
    expect(state.sub![0][2]).toBe(9);
    expect(state.sub![2][1]).toBe(11);
  });

  it("rejects negative weights", () => {
    expect(() => setSub(unitState(), 0, 1, -1)).toThrow();
    expect(() => setIndel(unitState(), 0, -2)).toThrow();
  });

  it("switching to basic drops substitutions, switching back seeds indel sums", () => {
    let state = setKind(unitState(), "basic");
    expect(state.sub).toBeNull();
    expect(() => setSub(state, 0, 1, 1)).toThrow();
    state = setKind(state, "levenshtein");
    expect(state.sub![0][1]).toBe(3); // indel 2 + indel 1
    expect(state.sub![0][0]).toBe(4);
    expect(isSymmetric(state)).toBe(true);
  });

  it("serializes to the exact distance config fragment the service accepts", () => {
    const config = toDistanceConfig(unitState());
    expect(validateAgainstSchema("distance_config", config).errors).toEqual([]);
    const basic = toDistanceConfig(setKind(unitState(), "basic"));
    expect(validateAgainstSchema("distance_config", basic).errors).toEqual([]);
  });

  it("round-trips through the config representation", () => {
    const state = unitState();
    const back = fromDistanceConfig(toDistanceConfig(state) as any);
    expect(back).toEqual(state);
  });
});
