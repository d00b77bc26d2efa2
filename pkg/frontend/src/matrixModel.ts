/** Synchronization-matrix view model.
 *
 * Cell content comes straight from the service (JSON or CSV export); the
 * only client-side arithmetic is mapping a clicked cell back to plan
 * nodes, which replays the same overlap rule the export documents. */

import type { BattlefieldFunction, MatrixDoc, NodeDoc, PlanDoc } from "./types.js";

export const CELL_JOIN = "; ";

export interface MatrixModel {
  clockStart: string;
  periodMin: number;
  columnLabels: string[];
  rows: { function: string; cells: string[][] }[];
}

export function matrixFromJson(doc: MatrixDoc): MatrixModel {
  return {
    clockStart: doc.clock_start,
    periodMin: doc.period_min,
    columnLabels: [...doc.columns],
    rows: doc.rows.map((r) => ({
      function: r.function,
      cells: r.cells.map((c) => [...c]),
    })),
  };
}

/** Parse the service's CSV export (every cell quoted, labels joined by
 * "; "). The period and clock start are not part of the CSV, so callers
 * that need them must use the JSON form. */
export function matrixFromCsv(text: string): MatrixModel {
  const records = parseCsv(text);
  if (records.length === 0) {
    throw new Error("empty matrix CSV");
  }
  const header = records[0]!;
  const columnLabels = header.slice(1);
  const rows = records.slice(1).map((rec) => ({
    function: rec[0] ?? "",
    cells: rec.slice(1).map((cell) => (cell === "" ? [] : cell.split(CELL_JOIN))),
  }));
  return { clockStart: "", periodMin: 0, columnLabels, rows };
}

function parseCsv(text: string): string[][] {
  const records: string[][] = [];
  let record: string[] = [];
  let field = "";
  let quoted = false;
  let i = 0;
  while (i < text.length) {
    const ch = text[i]!;
    if (quoted) {
      if (ch === '"') {
        if (text[i + 1] === '"') {
          field += '"';
          i += 2;
          continue;
        }
        quoted = false;
        i += 1;
        continue;
      }
      field += ch;
      i += 1;
      continue;
    }
    if (ch === '"') {
      quoted = true;
      i += 1;
    } else if (ch === ",") {
      record.push(field);
      field = "";
      i += 1;
    } else if (ch === "\n") {
      record.push(field);
      records.push(record);
      record = [];
      field = "";
      i += 1;
    } else if (ch === "\r") {
      i += 1;
    } else {
      field += ch;
      i += 1;
    }
  }
  if (field !== "" || record.length > 0) {
    record.push(field);
    records.push(record);
  }
  return records;
}

/** Display text of one cell, exactly as the CSV export renders it. */
export function cellText(model: MatrixModel, rowIndex: number, col: number): string {
  return (model.rows[rowIndex]?.cells[col] ?? []).join(CELL_JOIN);
}

export function labelFor(node: NodeDoc): string {
  const base = `${node.actor} ${node.verb}`;
  return node.side === "enemy" ? `EN ${base}` : base;
}

/** Nodes whose windows overlap a matrix cell, in the cell's own order
 * (start minute, then node id). Zero-duration actions occupy the single
 * column containing their start. */
export function nodesForCell(
  plan: PlanDoc, fn: BattlefieldFunction | string, col: number, periodMin: number,
): NodeDoc[] {
  const colStart = col * periodMin;
  const colEnd = colStart + periodMin;
  const hits = plan.nodes.filter((n) => {
    if (n.function !== fn || n.window === null) {
      return false;
    }
    const s = n.window.start_min;
    const e = n.window.end_min > s ? n.window.end_min : s + 1;
    return s < colEnd && e > colStart;
  });
  hits.sort((a, b) =>
    a.window!.start_min - b.window!.start_min || a.id - b.id);
  return hits;
}
