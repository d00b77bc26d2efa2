/** Course-of-action draft editing.
 *
 * The draft is a plain scenario document plus edit operations (place and
 * move units, draw control measures, add tasks). Validation mirrors the
 * server and gates saving: a draft with violations never leaves the
 * browser. */

import type {
  Cell, MeasureDoc, MeasureKind, ScenarioDoc, TaskDoc, UnitDoc, Violation,
} from "./types.js";
import { validateScenario } from "./validation.js";

export class ScenarioDraft {
  private doc: ScenarioDoc;

  constructor(doc: ScenarioDoc) {
    this.doc = structuredClone(doc);
  }

  static fromJson(text: string): ScenarioDraft {
    return new ScenarioDraft(JSON.parse(text) as ScenarioDoc);
  }

  get scenario(): ScenarioDoc {
    return this.doc;
  }

  placeUnit(unit: UnitDoc): void {
    this.doc.units.push(structuredClone(unit));
  }

  moveUnit(unitId: string, to: Cell): void {
    const unit = this.doc.units.find((u) => u.id === unitId);
    if (!unit) {
      throw new Error(`no unit '${unitId}' in the draft`);
    }
    unit.position = [...to] as Cell;
  }

  drawMeasure(id: string, kind: MeasureKind, geometry: Cell[], label: string): void {
    this.doc.measures.push({
      id, kind, geometry: geometry.map((g) => [...g] as Cell), label,
    });
  }

  addTask(task: TaskDoc): void {
    this.doc.coa.push(structuredClone(task));
  }

  removeTask(taskId: string): void {
    this.doc.coa = this.doc.coa.filter((t) => t.id !== taskId);
    for (const t of this.doc.coa) {
      t.after = t.after.filter((a) => a !== taskId);
    }
  }

  /** Inline violations, identical codes and paths to the server. */
  validate(): Violation[] {
    return validateScenario(this.doc);
  }

  get canSave(): boolean {
    return this.validate().length === 0;
  }

  /** Serialized draft in the exact shape the service ingests. Throws if
   * violations remain; the UI must keep the save action disabled. */
  toJson(): string {
    const violations = this.validate();
    if (violations.length > 0) {
      throw new Error(`draft has ${violations.length} violation(s); fix before saving`);
    }
    return JSON.stringify(this.doc, null, 2) + "\n";
  }
}
