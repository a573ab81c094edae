// @vitest-environment happy-dom
import { describe, expect, it } from "vitest";

import type { TableCluster } from "../src/api.js";
import { renderClusterTable } from "../src/table.js";

const CLUSTERS: TableCluster[] = [
  {
    id: 0,
    noise: false,
    original_count: 22,
    abstracted_count: 2,
    items: [
      { representative: "cm", count: 18, abstracted: "cm", originals: [["cm", 18]] },
      { representative: "mm", count: 4, abstracted: "mm", originals: [["mm", 4]] },
    ],
  },
  {
    id: -1,
    noise: true,
    original_count: 3,
    abstracted_count: 1,
    items: [{ representative: "-", count: 3, abstracted: "-", originals: [["-", 3]] }],
  },
];

describe("cluster table rendering", () => {
  it("renders clusters as columns with count rows and expandable boxes", () => {
    const container = document.createElement("div");
    renderClusterTable(container, CLUSTERS);

    const rows = container.querySelectorAll("tr");
    expect(rows.length).toBe(4); // ids, original counts, abstracted counts, members

    const idCells = rows[0].querySelectorAll("td");
    expect(idCells.length).toBe(2);
    expect(idCells[0].textContent).toBe("cluster 0");
    expect(idCells[1].textContent).toBe("noise");

    expect(rows[1].querySelectorAll("td")[0].textContent).toBe("22 original");
    expect(rows[2].querySelectorAll("td")[0].textContent).toBe("2 abstracted");

    const boxes = container.querySelectorAll("details.rep-box");
    expect(boxes.length).toBe(3);
    const first = boxes[0].querySelector("summary");
    expect(first?.textContent).toBe("cm (18)");
  });

  it("renders the originals layout as plain value cells", () => {
    const container = document.createElement("div");
    renderClusterTable(container, [
      { id: 0, noise: false, original_count: 2, abstracted_count: 1, items: ["cm", "CM"] },
    ]);
    const values = container.querySelectorAll(".value-cell");
    expect([...values].map((v) => v.textContent)).toEqual(["cm", "CM"]);
  });
});
