/** Workbench session: one scenario, one plan id, a tree of versions.
 *
 * Plan content is cached as the raw text the server returned, so
 * switching versions and back reproduces byte-identical views; the
 * history tree mirrors the server store after every mutation. */

import type { ApiClient } from "./api.js";
import type {
  EditSet, HistoryDoc, PlanDoc, ScenarioDoc, Violation,
} from "./types.js";
import { validateScenario } from "./validation.js";

export interface Selection {
  nodeId?: number;
  unitId?: string;
  cell?: [number, number];
}

export class WorkbenchSession {
  scenarioId: string | null = null;
  scenarioDoc: ScenarioDoc | null = null;
  planId: string | null = null;
  currentVersion: number | null = null;
  selection: Selection = {};

  private planTexts = new Map<number, string>();
  private historyDoc: HistoryDoc | null = null;

  constructor(private readonly api: ApiClient) {}

  /** Upload a scenario; the client-side mirror runs first and an invalid
   * draft never leaves the browser. */
  async loadScenario(docText: string): Promise<Violation[]> {
    const doc = JSON.parse(docText) as ScenarioDoc;
    const local = validateScenario(doc);
    if (local.length > 0) {
      return local;
    }
    const receipt = await this.api.postScenario(docText);
    this.scenarioId = receipt.scenario_id;
    this.scenarioDoc = doc;
    return receipt.violations;
  }

  async createPlan(): Promise<void> {
    if (this.scenarioId === null) {
      throw new Error("no scenario loaded");
    }
    const ref = await this.api.postPlan(this.scenarioId);
    this.planId = ref.plan_id;
    await this.switchVersion(ref.version);
    await this.refreshHistory();
  }

  async switchVersion(version: number): Promise<void> {
    if (this.planId === null) {
      throw new Error("no plan yet");
    }
    if (!this.planTexts.has(version)) {
      this.planTexts.set(version, await this.api.getPlanText(this.planId, version));
    }
    this.currentVersion = version;
    this.selection = {};
  }

  /** POST the edits against the current version, then switch to the new
   * version the server created (its parent is the edited version). */
  async editAndReplan(edits: EditSet): Promise<number> {
    if (this.planId === null || this.currentVersion === null) {
      throw new Error("no plan yet");
    }
    const ref = await this.api.postEdits(this.planId, this.currentVersion, edits);
    await this.switchVersion(ref.version);
    await this.refreshHistory();
    return ref.version;
  }

  /** Revert = switch back to any ancestor; nothing is deleted. */
  async revertTo(version: number): Promise<void> {
    await this.switchVersion(version);
  }

  async refreshHistory(): Promise<void> {
    if (this.planId === null) {
      return;
    }
    this.historyDoc = await this.api.getHistory(this.planId);
  }

  get history(): { version: number; parent: number | null }[] {
    return this.historyDoc ? [...this.historyDoc.versions] : [];
  }

  /** True when the server knows versions this session has never seen. */
  isStale(): boolean {
    if (this.historyDoc === null) {
      return false;
    }
    return this.historyDoc.versions.some((v) => !this.planTexts.has(v.version));
  }

  currentPlanText(): string {
    if (this.currentVersion === null) {
      throw new Error("no plan yet");
    }
    return this.planTexts.get(this.currentVersion)!;
  }

  currentPlan(): PlanDoc {
    return JSON.parse(this.currentPlanText()) as PlanDoc;
  }

  planTextOf(version: number): string | undefined {
    return this.planTexts.get(version);
  }
}
