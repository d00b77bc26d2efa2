/** Single-page wiring: scenario upload, planning, matrix, map animation,
 * version history with one-click revert, and the diff panel. */

import { HttpApiClient, ServiceError } from "../api.js";
import { changeCount, diffPlans } from "../diff.js";
import { matrixFromJson } from "../matrixModel.js";
import { WorkbenchSession } from "../session.js";
import { TimelineScrubber } from "../timeline.js";
import type { EditSet, MatrixDoc, NodeDoc } from "../types.js";
import { paintMap, routeOf } from "./mapView.js";
import { describeNode, renderMatrix } from "./matrixView.js";

const CELL_PX = 14;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) {
    throw new Error(`missing element #${id}`);
  }
  return node as T;
}

export function startApp(): void {
  const api = new HttpApiClient("");
  const session = new WorkbenchSession(api);
  let matrixDoc: MatrixDoc | null = null;
  let scrubber: TimelineScrubber | null = null;
  let selected: NodeDoc | null = null;

  const status = el<HTMLElement>("status");
  const canvas = el<HTMLCanvasElement>("map");
  const detail = el<HTMLPreElement>("detail");

  const say = (text: string) => {
    status.textContent = text;
  };

  const oops = (err: unknown) => {
    if (err instanceof ServiceError) {
      const extra = err.detail.violations
        ? "\n" + err.detail.violations.map((v) => `${v.code} at ${v.path}`).join("\n")
        : "";
      say(`${err.detail.code}: ${err.detail.message}${extra}`);
    } else {
      say(String(err));
    }
  };

  const repaint = () => {
    if (!session.scenarioDoc) {
      return;
    }
    paintMap(canvas, {
      scenario: session.scenarioDoc,
      cellPx: CELL_PX,
      positions: scrubber?.positions(),
      selectedRoute: selected ? routeOf(selected) : null,
      selectedUnit: selected?.actor ?? null,
    });
  };

  const refreshMatrix = async () => {
    if (session.planId === null || session.currentVersion === null) {
      return;
    }
    const period = Number(el<HTMLInputElement>("period").value) || 30;
    matrixDoc = await api.getMatrix(session.planId, session.currentVersion, period);
    renderMatrix(el("matrix"), matrixFromJson(matrixDoc), session.currentPlan(), {
      onPick: (node) => {
        selected = node;
        detail.textContent = describeNode(node);
        repaint();
      },
    });
    const timeline = await api.getTimeline(session.planId, session.currentVersion);
    scrubber = new TimelineScrubber(timeline);
    const slider = el<HTMLInputElement>("scrubber");
    slider.max = String(scrubber.horizon);
    slider.value = "0";
    refreshHistoryPanel();
    repaint();
  };

  const refreshHistoryPanel = () => {
    const list = el<HTMLElement>("versions");
    list.textContent = "";
    for (const info of session.history) {
      const button = document.createElement("button");
      const here = info.version === session.currentVersion ? " (current)" : "";
      const parent = info.parent === null ? "root" : `from v${info.parent}`;
      button.textContent = `v${info.version} ${parent}${here}`;
      button.addEventListener("click", () => {
        void revertTo(info.version);
      });
      list.appendChild(button);
    }
  };

  const revertTo = async (version: number) => {
    const before = session.currentVersion;
    await session.revertTo(version);
    await refreshMatrix();
    say(`switched v${before} -> v${version}`);
  };

  const applyEdits = async (edits: EditSet, label: string) => {
    try {
      const previous = session.currentPlan();
      const version = await session.editAndReplan(edits);
      const diff = diffPlans(previous, session.currentPlan());
      await refreshMatrix();
      say(`${label} -> v${version}: +${diff.added.length} -${diff.removed.length} `
        + `~${diff.retimed.length} (${changeCount(diff)} changes)`);
    } catch (err) {
      oops(err);
    }
  };

  el<HTMLButtonElement>("load").addEventListener("click", async () => {
    try {
      const text = el<HTMLTextAreaElement>("scenario-input").value;
      const violations = await session.loadScenario(text);
      if (violations.length > 0) {
        say("violations:\n"
          + violations.map((v) => `${v.code} at ${v.path}: ${v.message}`).join("\n"));
        return;
      }
      say(`scenario ${session.scenarioId} loaded`);
      repaint();
    } catch (err) {
      oops(err);
    }
  });

  el<HTMLButtonElement>("plan").addEventListener("click", async () => {
    try {
      say("planning...");
      await session.createPlan();
      await refreshMatrix();
      say(`plan ${session.planId} v${session.currentVersion}: `
        + `${session.currentPlan().stats.node_count} actions`);
    } catch (err) {
      oops(err);
    }
  });

  el<HTMLButtonElement>("delete-task").addEventListener("click", () => {
    const taskId = el<HTMLInputElement>("task-id").value.trim();
    if (taskId) {
      void applyEdits({ deletes: [taskId] }, `delete ${taskId}`);
    }
  });

  el<HTMLButtonElement>("pin-node").addEventListener("click", () => {
    const node = Number(el<HTMLInputElement>("pin-id").value);
    const start = Number(el<HTMLInputElement>("pin-start").value);
    if (Number.isFinite(node) && Number.isFinite(start)) {
      void applyEdits({ pins: [{ node, start_min: start }] }, `pin ${node}@${start}`);
    }
  });

  el<HTMLInputElement>("scrubber").addEventListener("input", (ev) => {
    if (scrubber) {
      scrubber.scrubTo(Number((ev.target as HTMLInputElement).value));
      el<HTMLElement>("clock").textContent = `t+${scrubber.time} min`;
      repaint();
    }
  });

  el<HTMLInputElement>("period").addEventListener("change", () => {
    void refreshMatrix().catch(oops);
  });

  say("paste a scenario document and press Load.");
}

startApp();
