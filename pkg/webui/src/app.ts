/**
 * Application shell: one session at a time, one panel per workflow stage.
 * Configuration edits go straight to the service (which invalidates stale
 * results), previews and result views are re-fetched afterwards, and at
 * most one run request is in flight per session.
 */

import { ApiClient, ApiError, type Question, type TableCluster } from "./api.js";
import {
  layoutToWeights,
  weightsToLayout,
  REALIZATION_LIMIT_MESSAGE,
  type BlobLayout,
} from "./blob.js";
import {
  CLUSTERING_FORMS,
  UnsupportedCriterionError,
  clusteringFormToConfig,
  configToFormState,
  initialState,
  isEnabled,
  type FormSpec,
  type FormState,
} from "./forms.js";
import {
  fromDistanceConfig,
  setIndel,
  setKind,
  setSub,
  toDistanceConfig,
  type MatrixState,
} from "./matrix.js";
import { freshState, requestBody, toggle, type QuestionnaireState } from "./questionnaire.js";
import { colorFor, jitterCoincident, viewBoxFor, type ScatterPoint } from "./scatter.js";
import { renderClusterTable } from "./table.js";

const api = new ApiClient("");

interface AppState {
  sessionId: string | null;
  questionnaire: QuestionnaireState | null;
  matrix: MatrixState | null;
  blobLayout: BlobLayout | null;
  algorithm: string;
  clusteringState: FormState;
  running: boolean;
}

const state: AppState = {
  sessionId: null,
  questionnaire: null,
  matrix: null,
  blobLayout: null,
  algorithm: "hierarchical",
  clusteringState: initialState(CLUSTERING_FORMS["hierarchical"]),
  running: false,
};

const $ = (id: string): HTMLElement => {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el;
};

function flash(id: string, message: string, kind: "error" | "ok" = "error"): void {
  const box = $(id);
  box.textContent = message;
  box.className = `notice ${message ? kind : ""}`;
}

function describeError(err: unknown): string {
  if (err instanceof ApiError) return `${err.code}: ${err.message}`;
  return String(err);
}

// --- session -----------------------------------------------------------------

async function createSession(): Promise<void> {
  const text = ($("values-input") as HTMLTextAreaElement).value;
  const label = ($("label-input") as HTMLInputElement).value || "upload";
  try {
    const created = await api.createSessionFromText(text, label);
    state.sessionId = created.id;
    flash(
      "session-notice",
      `session ${created.id}: ${created.total_occurrences} values, ${created.distinct_values} distinct`,
      "ok"
    );
    await refreshSummary();
    await loadQuestionnaire();
    await refreshPreview();
  } catch (err) {
    flash("session-notice", describeError(err));
  }
}

async function refreshSummary(): Promise<void> {
  if (!state.sessionId) return;
  const summary = await api.getSession(state.sessionId);
  const r = summary.results;
  $("summary").textContent = [
    `abstraction: ${r.abstraction.present ? `${r.abstraction.groups} groups` : "pending"}`,
    `distances: ${r.distance.present ? `${r.distance.n} values` : "pending"}`,
    `clustering: ${r.clustering.present ? `${r.clustering.k} clusters` : "pending"}`,
    `embedding: ${r.embedding.present ? `stress ${r.embedding.stress.toFixed(4)}` : "pending"}`,
  ].join(" • ");
  if (!state.matrix) {
    state.matrix = fromDistanceConfig(summary.distance);
    renderMatrixEditor();
  }
}

// --- questionnaire + live preview ---------------------------------------------

async function loadQuestionnaire(): Promise<void> {
  const payload = await api.questionnaire();
  state.questionnaire = freshState(payload.questions);
  renderQuestionnaire(payload.questions);
}

function renderQuestionnaire(questions: Question[]): void {
  const root = $("questionnaire");
  root.textContent = "";
  for (const q of questions) {
    const row = document.createElement("label");
    row.className = "question";
    const box = document.createElement("input");
    box.type = "checkbox";
    box.checked = state.questionnaire?.answers[q.id] ?? true;
    box.addEventListener("change", () => void answerChanged(q.id));
    const text = document.createElement("span");
    text.textContent = q.text;
    text.title = q.example;
    row.append(box, text);
    root.appendChild(row);
  }
}

async function answerChanged(id: string): Promise<void> {
  if (!state.sessionId || !state.questionnaire) return;
  state.questionnaire = toggle(state.questionnaire, id);
  try {
    const { abstraction } = await api.translateQuestionnaire(requestBody(state.questionnaire).answers);
    await api.putConfig(state.sessionId, "abstraction", abstraction);
    flash("abstraction-notice", "", "ok");
    await refreshPreview();
    await refreshSummary();
  } catch (err) {
    // keep the previous preview on invalid configurations
    flash("abstraction-notice", describeError(err));
  }
}

async function refreshPreview(): Promise<void> {
  if (!state.sessionId) return;
  const preview = await api.preview(state.sessionId, 100);
  const root = $("preview");
  root.textContent = "";
  for (const group of preview.groups) {
    const div = document.createElement("div");
    div.className = "preview-group";
    const head = document.createElement("strong");
    head.textContent = group.abstracted === "" ? "∅" : group.abstracted;
    const members = document.createElement("span");
    members.textContent =
      " ← " + group.originals.map(([v, c]) => (c > 1 ? `${v} ×${c}` : v)).join(", ");
    div.append(head, members);
    root.appendChild(div);
  }
}

// --- weight editors -------------------------------------------------------------

function renderMatrixEditor(): void {
  if (!state.matrix) return;
  const m = state.matrix;
  const root = $("matrix-editor");
  root.textContent = "";

  const kindSelect = document.createElement("select");
  for (const kind of ["basic", "levenshtein"]) {
    const option = document.createElement("option");
    option.value = kind;
    option.textContent = kind === "basic" ? "basic edit distance" : "weighted Levenshtein";
    option.selected = m.kind === kind;
    kindSelect.appendChild(option);
  }
  kindSelect.addEventListener("change", () => {
    state.matrix = setKind(state.matrix!, kindSelect.value as "basic" | "levenshtein");
    renderMatrixEditor();
    void pushDistanceConfig();
  });
  root.appendChild(kindSelect);

  const table = document.createElement("table");
  table.className = "weight-matrix";
  const head = document.createElement("tr");
  head.appendChild(cell("th", ""));
  head.appendChild(cell("th", "− (ins/del)"));
  for (const c of m.classes) head.appendChild(cell("th", c.name, c.chars ?? "all other characters"));
  table.appendChild(head);

  const indelRow = document.createElement("tr");
  indelRow.appendChild(cell("th", "− (ins/del)"));
  indelRow.appendChild(cell("td", ""));
  m.indel.forEach((w, i) => indelRow.appendChild(weightInput(w, (v) => {
    state.matrix = setIndel(state.matrix!, i, v);
    void pushDistanceConfig();
  })));
  table.appendChild(indelRow);

  if (m.sub !== null) {
    m.classes.forEach((rowClass, i) => {
      const tr = document.createElement("tr");
      tr.appendChild(cell("th", rowClass.name));
      tr.appendChild(weightInput(m.indel[i], (v) => {
        state.matrix = setIndel(state.matrix!, i, v);
        renderMatrixEditor();
        void pushDistanceConfig();
      }));
      m.sub![i].forEach((w, j) => tr.appendChild(weightInput(w, (v) => {
        state.matrix = setSub(state.matrix!, i, j, v); // mirror cell follows
        renderMatrixEditor();
        void pushDistanceConfig();
      })));
      table.appendChild(tr);
    });
  }
  root.appendChild(table);
}

function cell(tag: "td" | "th", text: string, title?: string): HTMLElement {
  const el = document.createElement(tag);
  el.textContent = text;
  if (title) el.title = title;
  return el;
}

function weightInput(value: number, commit: (v: number) => void): HTMLElement {
  const td = document.createElement("td");
  const input = document.createElement("input");
  input.type = "number";
  input.min = "0";
  input.step = "0.5";
  input.value = String(value);
  input.addEventListener("change", () => {
    const v = Number(input.value);
    if (Number.isFinite(v) && v >= 0) commit(v);
  });
  td.appendChild(input);
  return td;
}

async function pushDistanceConfig(): Promise<void> {
  if (!state.sessionId || !state.matrix) return;
  try {
    await api.putConfig(state.sessionId, "distance", toDistanceConfig(state.matrix));
    flash("distance-notice", "", "ok");
    await refreshSummary();
  } catch (err) {
    flash("distance-notice", describeError(err));
  }
}

function switchToBlobView(): void {
  if (!state.matrix) return;
  if (state.matrix.sub === null) {
    flash("distance-notice", "the blob view needs substitution weights; switch to weighted Levenshtein first");
    return;
  }
  const scale = Number(($("blob-scale") as HTMLInputElement).value) || 1;
  const layout = weightsToLayout(
    {
      classes: state.matrix.classes.map((c) => c.name),
      indel: state.matrix.indel,
      sub: state.matrix.sub,
    },
    scale
  );
  if (layout === null) {
    flash("distance-notice", REALIZATION_LIMIT_MESSAGE);
    return;
  }
  state.blobLayout = layout;
  flash("distance-notice", "", "ok");
  renderBlobView();
}

function renderBlobView(): void {
  const layout = state.blobLayout;
  const svg = $("blob-canvas") as unknown as SVGSVGElement;
  while (svg.firstChild) svg.removeChild(svg.firstChild);
  if (!layout) return;

  const points = [...layout.blobs.map((b) => b.center), layout.indelCenter];
  const radii = layout.blobs.map((b) => b.radius);
  const extent = Math.max(1, ...points.map((p) => Math.max(Math.abs(p.x), Math.abs(p.y))), ...radii);
  svg.setAttribute("viewBox", `${-extent * 1.3} ${-extent * 1.3} ${extent * 2.6} ${extent * 2.6}`);

  const makeCircle = (cx: number, cy: number, r: number, cls: string): SVGCircleElement => {
    const circle = document.createElementNS("http://www.w3.org/2000/svg", "circle");
    circle.setAttribute("cx", String(cx));
    circle.setAttribute("cy", String(cy));
    circle.setAttribute("r", String(Math.max(r, extent * 0.02)));
    circle.setAttribute("class", cls);
    return circle;
  };

  layout.blobs.forEach((blob, index) => {
    const circle = makeCircle(blob.center.x, blob.center.y, blob.radius, "blob");
    attachDrag(circle, svg, (x, y) => {
      blob.center = { x, y };
      blobsEdited();
    });
    circle.addEventListener("wheel", (event) => {
      event.preventDefault();
      blob.radius = Math.max(0, blob.radius + (event.deltaY < 0 ? 0.1 : -0.1));
      blobsEdited();
    });
    const label = document.createElementNS("http://www.w3.org/2000/svg", "text");
    label.textContent = layout.blobs[index].name;
    label.setAttribute("x", String(blob.center.x));
    label.setAttribute("y", String(blob.center.y));
    label.setAttribute("class", "blob-label");
    svg.append(circle, label);
  });

  const indel = makeCircle(layout.indelCenter.x, layout.indelCenter.y, extent * 0.05, "blob indel");
  attachDrag(indel, svg, (x, y) => {
    layout.indelCenter = { x, y };
    blobsEdited();
  });
  const x = document.createElementNS("http://www.w3.org/2000/svg", "text");
  x.textContent = "X";
  x.setAttribute("x", String(layout.indelCenter.x));
  x.setAttribute("y", String(layout.indelCenter.y));
  x.setAttribute("class", "blob-label indel");
  svg.append(indel, x);
}

function attachDrag(
  circle: SVGCircleElement,
  svg: SVGSVGElement,
  moved: (x: number, y: number) => void
): void {
  circle.addEventListener("pointerdown", (down) => {
    down.preventDefault();
    circle.setPointerCapture(down.pointerId);
    const toData = (event: PointerEvent) => {
      const rect = svg.getBoundingClientRect();
      const [minX, minY, width, height] = (svg.getAttribute("viewBox") ?? "0 0 1 1")
        .split(" ")
        .map(Number);
      return {
        x: minX + ((event.clientX - rect.left) / rect.width) * width,
        y: minY + ((event.clientY - rect.top) / rect.height) * height,
      };
    };
    const onMove = (event: PointerEvent) => {
      const p = toData(event);
      moved(p.x, p.y);
    };
    const onUp = () => {
      circle.removeEventListener("pointermove", onMove);
      circle.removeEventListener("pointerup", onUp);
    };
    circle.addEventListener("pointermove", onMove);
    circle.addEventListener("pointerup", onUp);
  });
}

function blobsEdited(): void {
  if (!state.blobLayout || !state.matrix) return;
  const scale = Number(($("blob-scale") as HTMLInputElement).value) || 1;
  state.blobLayout.scale = scale;
  const induced = layoutToWeights(state.blobLayout);
  state.matrix = {
    ...state.matrix,
    kind: "levenshtein",
    indel: induced.indel,
    sub: induced.sub,
  };
  renderBlobView();
  renderMatrixEditor(); // matrix view always shows the induced numbers
  void pushDistanceConfig();
}

// --- clustering form ---------------------------------------------------------------

function renderClusteringForm(): void {
  const spec: FormSpec = CLUSTERING_FORMS[state.algorithm];
  const root = $("clustering-form");
  root.textContent = "";

  const algoSelect = document.createElement("select");
  for (const name of Object.keys(CLUSTERING_FORMS)) {
    const option = document.createElement("option");
    option.value = name;
    option.textContent = name;
    option.selected = name === state.algorithm;
    algoSelect.appendChild(option);
  }
  algoSelect.addEventListener("change", () => {
    state.algorithm = algoSelect.value;
    state.clusteringState = initialState(CLUSTERING_FORMS[state.algorithm]);
    renderClusteringForm();
  });
  root.appendChild(algoSelect);

  for (const field of spec.fields) {
    const module = document.createElement("div");
    module.className = "form-module";
    const enabled = isEnabled(spec, state.clusteringState, field.id);
    if (!enabled) module.classList.add("disabled");

    const label = document.createElement("label");
    label.textContent = field.label;
    if (field.help) label.title = field.help;
    module.appendChild(label);

    if (field.kind === "enum") {
      for (const option of field.options ?? []) {
        const wrap = document.createElement("label");
        wrap.className = "radio";
        const radio = document.createElement("input");
        radio.type = "radio";
        radio.name = field.id;
        radio.value = option;
        radio.checked = state.clusteringState[field.id] === option;
        radio.disabled = !enabled;
        radio.addEventListener("change", () => {
          state.clusteringState[field.id] = option;
          renderClusteringForm(); // dependencies may have changed
          void pushClusteringConfig();
        });
        wrap.append(radio, document.createTextNode(option));
        wrap.title = field.help ?? "";
        module.appendChild(wrap);
      }
    } else if (field.kind === "boolean") {
      const box = document.createElement("input");
      box.type = "checkbox";
      box.checked = Boolean(state.clusteringState[field.id]);
      box.disabled = !enabled;
      box.addEventListener("change", () => {
        state.clusteringState[field.id] = box.checked;
        void pushClusteringConfig();
      });
      module.appendChild(box);
    } else {
      const slider = document.createElement("input");
      slider.type = "range";
      slider.min = String(field.min ?? 0);
      slider.max = String(field.max ?? 100);
      slider.step = String(field.step ?? 1);
      slider.value = String(state.clusteringState[field.id]);
      slider.disabled = !enabled;
      const readout = document.createElement("input");
      readout.type = "number";
      readout.min = slider.min;
      readout.max = slider.max;
      readout.step = slider.step;
      readout.value = slider.value;
      readout.disabled = !enabled;
      const commit = (raw: string) => {
        const v = field.kind === "integer" ? Math.round(Number(raw)) : Number(raw);
        if (!Number.isFinite(v)) return;
        state.clusteringState[field.id] = v;
        slider.value = String(v);
        readout.value = String(v);
        void pushClusteringConfig();
      };
      slider.addEventListener("input", () => (readout.value = slider.value));
      slider.addEventListener("change", () => commit(slider.value));
      readout.addEventListener("change", () => commit(readout.value));
      module.append(slider, readout);
    }
    root.appendChild(module);
  }
}

async function pushClusteringConfig(): Promise<void> {
  if (!state.sessionId) return;
  try {
    const config = clusteringFormToConfig(state.algorithm, state.clusteringState);
    await api.putConfig(state.sessionId, "clustering", config);
    flash("clustering-notice", "", "ok");
    await refreshSummary();
  } catch (err) {
    if (err instanceof UnsupportedCriterionError) {
      flash("clustering-notice", err.message);
    } else {
      flash("clustering-notice", describeError(err));
    }
  }
}

// --- pipeline + results ---------------------------------------------------------------

async function runPipeline(): Promise<void> {
  if (!state.sessionId || state.running) return;
  state.running = true;
  const button = $("run-button") as HTMLButtonElement;
  button.disabled = true;
  const poller = window.setInterval(() => void pollProgress(), 250);
  try {
    for (const stage of ["abstract", "distance", "cluster", "project"] as const) {
      flash("run-notice", `running ${stage}…`, "ok");
      await api.run(state.sessionId, stage);
    }
    flash("run-notice", "pipeline complete", "ok");
    await refreshSummary();
    await refreshResults();
  } catch (err) {
    flash("run-notice", describeError(err));
  } finally {
    window.clearInterval(poller);
    state.running = false;
    button.disabled = false;
  }
}

async function pollProgress(): Promise<void> {
  if (!state.sessionId) return;
  try {
    const progress = await api.progress(state.sessionId);
    if (progress.state === "running" && progress.total) {
      flash("run-notice", `running ${progress.stage}: ${progress.done}/${progress.total} pairs`, "ok");
    }
  } catch {
    // progress polling is best effort
  }
}

async function refreshResults(): Promise<void> {
  if (!state.sessionId) return;
  const layout = ($("table-layout") as HTMLSelectElement).value as "representatives" | "originals";
  try {
    const table = await api.table(state.sessionId, layout);
    renderClusterTable($("cluster-table"), table.clusters as TableCluster[]);
  } catch (err) {
    $("cluster-table").textContent = describeError(err);
  }
  try {
    const scatter = await api.scatter(state.sessionId);
    renderScatter(scatter.points as ScatterPoint[], scatter.k);
  } catch (err) {
    $("scatter-note").textContent = describeError(err);
  }
}

function renderScatter(points: ScatterPoint[], k: number): void {
  const svg = $("scatter-canvas") as unknown as SVGSVGElement;
  while (svg.firstChild) svg.removeChild(svg.firstChild);
  const box = viewBoxFor(jitterCoincident(points, 0));
  const jitterRadius = 0.015 * Math.max(box.width, box.height);
  const placed = jitterCoincident(points, jitterRadius);
  const finalBox = viewBoxFor(placed);
  svg.setAttribute("viewBox", `${finalBox.minX} ${finalBox.minY} ${finalBox.width} ${finalBox.height}`);
  const dotRadius = 0.008 * Math.max(finalBox.width, finalBox.height);

  for (const p of placed) {
    const circle = document.createElementNS("http://www.w3.org/2000/svg", "circle");
    circle.setAttribute("cx", String(p.plotX));
    circle.setAttribute("cy", String(p.plotY));
    circle.setAttribute("r", String(dotRadius));
    circle.setAttribute("fill", colorFor(p.color, k));
    const title = document.createElementNS("http://www.w3.org/2000/svg", "title");
    title.textContent = `${p.label} (${p.count} values)` + (p.cluster === -1 ? " [noise]" : ` [cluster ${p.cluster}]`);
    circle.appendChild(title);
    svg.appendChild(circle);

    const label = document.createElementNS("http://www.w3.org/2000/svg", "text");
    label.textContent = p.label;
    label.setAttribute("x", String(p.plotX + dotRadius * 1.5));
    label.setAttribute("y", String(p.plotY - dotRadius * 0.5));
    label.setAttribute("class", "scatter-label");
    label.setAttribute("font-size", String(dotRadius * 2.2));
    svg.appendChild(label);
  }
  $("scatter-note").textContent = `${points.length} abstracted values, ${k} clusters`;
}

async function loadProfile(name: string): Promise<void> {
  if (!state.sessionId) {
    flash("session-notice", "create a session first");
    return;
  }
  try {
    const profile = await api.profile(name);
    await api.putConfig(state.sessionId, "abstraction", profile.abstraction);
    await api.putConfig(state.sessionId, "distance", profile.distance);
    await api.putConfig(state.sessionId, "clustering", profile.clustering);
    state.matrix = fromDistanceConfig(profile.distance);
    renderMatrixEditor();
    const { algorithm, state: formState } = configToFormState(profile.clustering);
    state.algorithm = algorithm;
    state.clusteringState = formState;
    renderClusteringForm();
    await refreshPreview();
    await refreshSummary();
    flash("session-notice", `profile ${name} loaded`, "ok");
  } catch (err) {
    flash("session-notice", describeError(err));
  }
}

async function boot(): Promise<void> {
  renderClusteringForm();
  $("create-session").addEventListener("click", () => void createSession());
  $("run-button").addEventListener("click", () => void runPipeline());
  $("to-blob-view").addEventListener("click", () => switchToBlobView());
  $("blob-scale").addEventListener("change", () => blobsEdited());
  $("table-layout").addEventListener("change", () => void refreshResults());
  try {
    const { profiles } = await api.profiles();
    const select = $("profile-select") as HTMLSelectElement;
    for (const p of profiles) {
      const option = document.createElement("option");
      option.value = p.name;
      option.textContent = `${p.name} — ${p.description}`;
      select.appendChild(option);
    }
    $("load-profile").addEventListener("click", () => void loadProfile(select.value));
  } catch (err) {
    flash("session-notice", `service unreachable: ${describeError(err)}`);
  }
}

if (typeof document !== "undefined" && document.getElementById("create-session")) {
  void boot();
}
