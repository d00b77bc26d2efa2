/** Canvas rendering of the terrain grid, control measures, units, a
 * selected route, and animated unit positions. Pure drawing, no state. */

import type { Cell, NodeDoc, ScenarioDoc } from "../types.js";

const TERRAIN_COLORS: Record<string, string> = {
  open: "#dce8c8",
  urban: "#c0b8ae",
  forest: "#9dbb8a",
  water: "#9cc3e4",
  obstacle: "#6f6f6f",
};

export interface MapPaintOptions {
  scenario: ScenarioDoc;
  cellPx: number;
  positions?: Record<string, [number, number]>; // animated overrides
  selectedRoute?: Cell[] | null;
  selectedUnit?: string | null;
}

export function paintMap(canvas: HTMLCanvasElement, opts: MapPaintOptions): void {
  const { scenario, cellPx } = opts;
  const { width, height, cells } = scenario.terrain;
  canvas.width = width * cellPx;
  canvas.height = height * cellPx;
  const ctx = canvas.getContext("2d");
  if (!ctx) {
    return;
  }

  for (let r = 0; r < height; r++) {
    for (let c = 0; c < width; c++) {
      const cell = cells[r * width + c];
      ctx.fillStyle = TERRAIN_COLORS[cell ? cell.kind : "open"] ?? "#ffffff";
      ctx.fillRect(c * cellPx, r * cellPx, cellPx, cellPx);
    }
  }

  ctx.lineWidth = 2;
  for (const m of scenario.measures) {
    ctx.strokeStyle = m.kind === "objective" ? "#c0392b" : "#34495e";
    ctx.setLineDash(m.kind === "phase_line" ? [6, 4] : []);
    ctx.beginPath();
    m.geometry.forEach(([r, c], i) => {
      const x = (c + 0.5) * cellPx;
      const y = (r + 0.5) * cellPx;
      if (i === 0) {
        ctx.moveTo(x, y);
      } else {
        ctx.lineTo(x, y);
      }
    });
    ctx.stroke();
    ctx.setLineDash([]);
    const anchor = m.geometry[Math.floor(m.geometry.length / 2)];
    if (anchor) {
      ctx.fillStyle = "#2c3e50";
      ctx.font = `${Math.max(9, cellPx * 0.8)}px sans-serif`;
      ctx.fillText(m.label, (anchor[1] + 0.6) * cellPx, (anchor[0] + 0.2) * cellPx);
    }
  }

  if (opts.selectedRoute) {
    ctx.strokeStyle = "#8e44ad";
    ctx.lineWidth = 3;
    ctx.beginPath();
    opts.selectedRoute.forEach(([r, c], i) => {
      const x = (c + 0.5) * cellPx;
      const y = (r + 0.5) * cellPx;
      if (i === 0) {
        ctx.moveTo(x, y);
      } else {
        ctx.lineTo(x, y);
      }
    });
    ctx.stroke();
  }

  for (const unit of scenario.units) {
    const pos = opts.positions?.[unit.id] ?? unit.position;
    const x = (pos[1] + 0.5) * cellPx;
    const y = (pos[0] + 0.5) * cellPx;
    ctx.fillStyle = unit.side === "friendly" ? "#2e6da4" : "#b03a2e";
    ctx.beginPath();
    ctx.arc(x, y, cellPx * 0.38, 0, Math.PI * 2);
    ctx.fill();
    if (opts.selectedUnit === unit.id) {
      ctx.strokeStyle = "#f1c40f";
      ctx.lineWidth = 3;
      ctx.stroke();
    }
    ctx.fillStyle = "#ffffff";
    ctx.font = `bold ${Math.max(8, cellPx * 0.5)}px sans-serif`;
    ctx.textAlign = "center";
    ctx.textBaseline = "middle";
    ctx.fillText(unit.kind[0]!.toUpperCase(), x, y);
    ctx.textAlign = "start";
    ctx.textBaseline = "alphabetic";
  }
}

export function cellAtPixel(ev: MouseEvent, canvas: HTMLCanvasElement,
                            cellPx: number): Cell {
  const rect = canvas.getBoundingClientRect();
  const col = Math.floor((ev.clientX - rect.left) / cellPx);
  const row = Math.floor((ev.clientY - rect.top) / cellPx);
  return [row, col];
}

export function routeOf(node: NodeDoc): Cell[] | null {
  return node.route ? node.route.cells : null;
}
