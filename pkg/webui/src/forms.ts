/**
 * Declarative parameter forms with dependency rules.
 *
 * Every clustering parameter is one module: a checkbox, a slider with
 * numeric readout, or radio buttons, optionally enabled only while another
 * field holds a specific value.  The hierarchical form's stop criterion
 * realizes the mutual exclusion between the distance threshold and the
 * cluster count: exactly one of them is active at any time.
 */

export type FieldValue = number | boolean | string;

export interface FieldSpec {
  id: string;
  label: string;
  kind: "boolean" | "number" | "integer" | "enum";
  options?: string[];
  min?: number;
  max?: number;
  step?: number;
  initial: FieldValue;
  help?: string;
  /** field is editable only while another field holds a given value */
  enabledWhen?: { field: string; equals: FieldValue };
  /** present in the form for parity with the research prototype only */
  unsupported?: boolean;
}

export interface FormSpec {
  fields: FieldSpec[];
}

export type FormState = Record<string, FieldValue>;

export function initialState(spec: FormSpec): FormState {
  const state: FormState = {};
  for (const f of spec.fields) state[f.id] = f.initial;
  return state;
}

export function isEnabled(spec: FormSpec, state: FormState, fieldId: string): boolean {
  const field = spec.fields.find((f) => f.id === fieldId);
  if (!field) throw new Error(`unknown field ${fieldId}`);
  if (!field.enabledWhen) return true;
  return state[field.enabledWhen.field] === field.enabledWhen.equals;
}

export const hierarchicalForm: FormSpec = {
  fields: [
    {
      id: "linkage",
      label: "Linkage",
      kind: "enum",
      options: ["complete", "single", "average"],
      initial: "complete",
      help: "inter-cluster distance: complete = farthest pair, single = nearest pair, average = mean over pairs",
    },
    {
      id: "criterion",
      label: "Stop criterion",
      kind: "enum",
      options: ["distance_threshold", "n_clusters", "inconsistent"],
      initial: "distance_threshold",
      help: "only one stop condition applies at a time",
    },
    {
      id: "distance_threshold",
      label: "Distance threshold",
      kind: "number",
      min: 0,
      max: 1000,
      step: 0.5,
      initial: 3.5,
      enabledWhen: { field: "criterion", equals: "distance_threshold" },
      help: "merging stops once every inter-cluster distance exceeds this",
    },
    {
      id: "n_clusters",
      label: "Number of clusters",
      kind: "integer",
      min: 1,
      max: 200,
      step: 1,
      initial: 10,
      enabledWhen: { field: "criterion", equals: "n_clusters" },
      help: "merging stops when exactly this many clusters remain",
    },
    {
      id: "depth",
      label: "Depth",
      kind: "integer",
      min: 1,
      max: 20,
      step: 1,
      initial: 2,
      enabledWhen: { field: "criterion", equals: "inconsistent" },
      unsupported: true,
      help: "inconsistency-coefficient depth; the analysis service does not implement this criterion",
    },
  ],
};

export const kmedoidsForm: FormSpec = {
  fields: [
    { id: "k", label: "Number of clusters (k)", kind: "integer", min: 1, max: 200, step: 1, initial: 5 },
    { id: "max_iter", label: "Max swap iterations", kind: "integer", min: 1, max: 1000, step: 1, initial: 100 },
    { id: "seed", label: "Seed", kind: "integer", min: 0, max: 1_000_000, step: 1, initial: 0 },
  ],
};

export const dbscanForm: FormSpec = {
  fields: [
    { id: "eps", label: "Neighborhood radius (eps)", kind: "number", min: 0, max: 1000, step: 0.1, initial: 2.0 },
    { id: "min_samples", label: "Min samples", kind: "integer", min: 1, max: 100, step: 1, initial: 2 },
  ],
};

export const CLUSTERING_FORMS: Record<string, FormSpec> = {
  hierarchical: hierarchicalForm,
  kmedoids: kmedoidsForm,
  dbscan: dbscanForm,
};

export class UnsupportedCriterionError extends Error {}

/**
 * Serialize form state into exactly the clustering config fragment the
 * service accepts.  Only the enabled stop field is carried; the other is
 * null, so the mutual exclusion is structural, not advisory.
 */
export function clusteringFormToConfig(algorithm: string, state: FormState): object {
  if (algorithm === "hierarchical") {
    const criterion = state["criterion"];
    if (criterion === "inconsistent") {
      throw new UnsupportedCriterionError(
        "the 'inconsistent' criterion is not available in the analysis service; " +
          "choose a distance threshold or a cluster count"
      );
    }
    return {
      algorithm,
      hierarchical: {
        linkage: state["linkage"],
        distance_threshold: criterion === "distance_threshold" ? Number(state["distance_threshold"]) : null,
        n_clusters: criterion === "n_clusters" ? Number(state["n_clusters"]) : null,
      },
    };
  }
  if (algorithm === "kmedoids") {
    return {
      algorithm,
      kmedoids: {
        k: Number(state["k"]),
        max_iter: Number(state["max_iter"]),
        seed: Number(state["seed"]),
      },
    };
  }
  if (algorithm === "dbscan") {
    return {
      algorithm,
      dbscan: { eps: Number(state["eps"]), min_samples: Number(state["min_samples"]) },
    };
  }
  throw new Error(`unknown algorithm ${algorithm}`);
}

/** Read a stored clustering config back into form state. */
export function configToFormState(config: {
  algorithm: string;
  hierarchical?: { linkage: string; distance_threshold: number | null; n_clusters: number | null };
  kmedoids?: { k: number; max_iter?: number; seed?: number };
  dbscan?: { eps: number; min_samples: number };
}): { algorithm: string; state: FormState } {
  const algorithm = config.algorithm;
  const state = initialState(CLUSTERING_FORMS[algorithm]);
  if (algorithm === "hierarchical" && config.hierarchical) {
    state["linkage"] = config.hierarchical.linkage;
    if (config.hierarchical.n_clusters !== null && config.hierarchical.n_clusters !== undefined) {
      state["criterion"] = "n_clusters";
      state["n_clusters"] = config.hierarchical.n_clusters;
    } else {
      state["criterion"] = "distance_threshold";
      state["distance_threshold"] = config.hierarchical.distance_threshold ?? 3.5;
    }
  } else if (algorithm === "kmedoids" && config.kmedoids) {
    state["k"] = config.kmedoids.k;
    state["max_iter"] = config.kmedoids.max_iter ?? 100;
    state["seed"] = config.kmedoids.seed ?? 0;
  } else if (algorithm === "dbscan" && config.dbscan) {
    state["eps"] = config.dbscan.eps;
    state["min_samples"] = config.dbscan.min_samples;
  }
  return { algorithm, state };
}
