/** Test support: fixture loading and a fake API that replays recorded
 * service responses byte for byte. */

import { readFileSync } from "node:fs";

import type { ApiClient, ScenarioReceipt } from "../src/api.js";
import type {
  EditSet, HistoryDoc, MatrixDoc, PlanRef, TimelineDoc,
} from "../src/types.js";

export function fixtureText(name: string): string {
  return readFileSync(new URL(`../fixtures/${name}`, import.meta.url), "utf-8");
}

export function fixtureJson<T>(name: string): T {
  return JSON.parse(fixtureText(name)) as T;
}

/** Serves the recorded conversation: plan v1, a delete-t6 edit creating
 * v2, an empty edit creating v3. Re-fetches of v1 return the recorded
 * post-edit bytes, mirroring the immutable server store. */
export class RecordedApi implements ApiClient {
  planFetches = new Map<number, number>();

  async postScenario(_doc: string): Promise<ScenarioReceipt> {
    return fixtureJson<ScenarioReceipt>("scenario_response.json");
  }

  async postPlan(_scenarioId: string): Promise<PlanRef> {
    return fixtureJson<PlanRef>("plan_response.json");
  }

  async getPlanText(_planId: string, version: number): Promise<string> {
    const count = (this.planFetches.get(version) ?? 0) + 1;
    this.planFetches.set(version, count);
    if (version === 1) {
      return count === 1
        ? fixtureText("plan_v1.json")
        : fixtureText("plan_v1_refetch.json");
    }
    return fixtureText(`plan_v${version}.json`);
  }

  async getMatrix(_planId: string, version: number): Promise<MatrixDoc> {
    return fixtureJson<MatrixDoc>(`matrix_v${version}.json`);
  }

  async getMatrixCsv(_planId: string, version: number): Promise<string> {
    if (version !== 1) {
      throw new Error("only v1 CSV was recorded");
    }
    return fixtureText("matrix_v1.csv");
  }

  async postEdits(_planId: string, version: number,
                  edits: EditSet): Promise<PlanRef> {
    if (version !== 1) {
      throw new Error("edits were recorded against version 1 only");
    }
    const recorded = fixtureJson<EditSet>("edit_delete_request.json");
    const wantsDelete = !edits.pins?.length && edits.amend_coa == null &&
      JSON.stringify(edits.deletes ?? []) === JSON.stringify(recorded.deletes);
    if (wantsDelete) {
      return fixtureJson<PlanRef>("edit_delete_response.json");
    }
    if (!edits.pins?.length && !edits.deletes?.length && edits.amend_coa == null) {
      return fixtureJson<PlanRef>("edit_empty_response.json");
    }
    throw new Error(`no recorded response for edits ${JSON.stringify(edits)}`);
  }

  async getTimeline(_planId: string, _version: number): Promise<TimelineDoc> {
    return fixtureJson<TimelineDoc>("timeline_v1.json");
  }

  async getHistory(_planId: string): Promise<HistoryDoc> {
    return fixtureJson<HistoryDoc>("history.json");
  }
}
