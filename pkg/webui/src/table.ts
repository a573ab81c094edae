/**
 * Cluster table rendering: one column per cluster, headed by the cluster id
 * and the original/abstracted value counts, then one expandable box per
 * abstraction group showing the representative, how many original values it
 * stands for, and the original values behind it.
 */

import type { TableCluster, TableItem } from "./api.js";

export function renderClusterTable(container: HTMLElement, clusters: TableCluster[]): void {
  container.textContent = "";
  const table = document.createElement("table");
  table.className = "cluster-table";

  const widthCells = (builder: (c: TableCluster) => string, className: string) => {
    const tr = document.createElement("tr");
    tr.className = className;
    for (const c of clusters) {
      const td = document.createElement("td");
      td.textContent = builder(c);
      tr.appendChild(td);
    }
    return tr;
  };

  table.appendChild(widthCells((c) => (c.noise ? "noise" : `cluster ${c.id}`), "row-ids"));
  table.appendChild(widthCells((c) => `${c.original_count} original`, "row-counts"));
  table.appendChild(widthCells((c) => `${c.abstracted_count} abstracted`, "row-counts"));

  const body = document.createElement("tr");
  body.className = "row-members";
  for (const cluster of clusters) {
    const td = document.createElement("td");
    for (const item of cluster.items) {
      td.appendChild(typeof item === "string" ? plainValue(item) : representativeBox(item));
    }
    body.appendChild(td);
  }
  table.appendChild(body);
  container.appendChild(table);
}

function plainValue(value: string): HTMLElement {
  const div = document.createElement("div");
  div.className = "value-cell";
  div.textContent = value;
  return div;
}

function representativeBox(item: TableItem): HTMLElement {
  const details = document.createElement("details");
  details.className = "rep-box";
  const summary = document.createElement("summary");
  summary.textContent = `${item.representative} (${item.count})`;
  summary.title = `abstracted form: ${item.abstracted}`;
  details.appendChild(summary);
  const list = document.createElement("ul");
  for (const [value, count] of item.originals) {
    const li = document.createElement("li");
    li.textContent = count > 1 ? `${value} ×${count}` : value;
    list.appendChild(li);
  }
  details.appendChild(list);
  return details;
}
