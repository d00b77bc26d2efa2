/** Synchronization-matrix table: function rows, period columns, the
 * exact cell text the CSV export carries, and click-to-select wiring. */

import { cellText, nodesForCell, type MatrixModel } from "../matrixModel.js";
import type { NodeDoc, PlanDoc } from "../types.js";

export interface MatrixCallbacks {
  onPick(node: NodeDoc): void;
}

export function renderMatrix(container: HTMLElement, model: MatrixModel,
                             plan: PlanDoc, cbs: MatrixCallbacks): void {
  container.textContent = "";
  const table = document.createElement("table");
  table.className = "sync-matrix";

  const head = table.createTHead().insertRow();
  const corner = document.createElement("th");
  corner.textContent = "function";
  head.appendChild(corner);
  for (const label of model.columnLabels) {
    const th = document.createElement("th");
    th.textContent = label;
    head.appendChild(th);
  }

  const body = table.createTBody();
  model.rows.forEach((row, rowIndex) => {
    const tr = body.insertRow();
    const th = document.createElement("th");
    th.textContent = row.function;
    tr.appendChild(th);
    row.cells.forEach((_, col) => {
      const td = tr.insertCell();
      td.textContent = cellText(model, rowIndex, col);
      if (td.textContent !== "") {
        td.className = "busy";
        td.addEventListener("click", () => {
          const nodes = nodesForCell(plan, row.function, col, model.periodMin);
          const first = nodes[0];
          if (first) {
            cbs.onPick(first);
          }
        });
      }
    });
  });
  container.appendChild(table);
}

/** Provenance popover text for a selected node (reaction audit trail). */
export function describeNode(node: NodeDoc): string {
  const lines = [
    `#${node.id} ${node.verb} (${node.side})`,
    `actor: ${node.actor}`,
    `origin: ${node.origin}, depth ${node.arc_depth}`,
    node.window
      ? `window: ${node.window.start_min}-${node.window.end_min} min`
      : "unscheduled",
    `path: ${node.path}`,
  ];
  if (node.provenance) {
    lines.push(`rule: ${node.provenance.rule_id}`);
    lines.push(`reactor: ${node.provenance.reactor_id} at `
      + `${node.provenance.distance_km.toFixed(1)} km`);
  }
  return lines.join("\n");
}
