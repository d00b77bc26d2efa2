/** Typed client for the planning service. The session talks to this
 * interface only, so tests can substitute recorded responses. */

import type {
  EditSet, HistoryDoc, MatrixDoc, PlanRef, TimelineDoc, Violation,
} from "./types.js";

export interface ScenarioReceipt {
  scenario_id: string;
  violations: Violation[];
}

export interface ApiError {
  status: number;
  code: string;
  message: string;
  path?: string;
  violations?: Violation[];
}

export class ServiceError extends Error {
  constructor(readonly detail: ApiError) {
    super(`${detail.code}: ${detail.message}`);
  }
}

export interface ApiClient {
  postScenario(doc: string): Promise<ScenarioReceipt>;
  postPlan(scenarioId: string): Promise<PlanRef>;
  /** Raw plan bytes; kept as text so byte-identity survives the client. */
  getPlanText(planId: string, version: number): Promise<string>;
  getMatrix(planId: string, version: number, period?: number): Promise<MatrixDoc>;
  getMatrixCsv(planId: string, version: number, period?: number): Promise<string>;
  postEdits(planId: string, version: number, edits: EditSet): Promise<PlanRef>;
  getTimeline(planId: string, version: number): Promise<TimelineDoc>;
  getHistory(planId: string): Promise<HistoryDoc>;
}

async function fail(resp: Response): Promise<never> {
  let detail: ApiError;
  try {
    const body = await resp.json();
    detail = { status: resp.status, ...body };
  } catch {
    detail = { status: resp.status, code: "HttpError", message: resp.statusText };
  }
  throw new ServiceError(detail);
}

export class HttpApiClient implements ApiClient {
  constructor(private readonly base: string = "") {}

  private async request(path: string, init?: RequestInit): Promise<Response> {
    const resp = await fetch(this.base + path, init);
    if (!resp.ok) {
      await fail(resp);
    }
    return resp;
  }

  async postScenario(doc: string): Promise<ScenarioReceipt> {
    const resp = await this.request("/api/scenarios", { method: "POST", body: doc });
    return resp.json();
  }

  async postPlan(scenarioId: string): Promise<PlanRef> {
    const resp = await this.request("/api/plans", {
      method: "POST",
      body: JSON.stringify({ scenario_id: scenarioId }),
    });
    return resp.json();
  }

  async getPlanText(planId: string, version: number): Promise<string> {
    const resp = await this.request(`/api/plans/${planId}/${version}`);
    return resp.text();
  }

  async getMatrix(planId: string, version: number, period?: number): Promise<MatrixDoc> {
    const qs = period === undefined ? "" : `?period=${period}`;
    const resp = await this.request(`/api/plans/${planId}/${version}/matrix${qs}`);
    return resp.json();
  }

  async getMatrixCsv(planId: string, version: number, period?: number): Promise<string> {
    const qs = period === undefined ? "format=csv" : `period=${period}&format=csv`;
    const resp = await this.request(`/api/plans/${planId}/${version}/matrix?${qs}`);
    return resp.text();
  }

  async postEdits(planId: string, version: number, edits: EditSet): Promise<PlanRef> {
    const resp = await this.request(`/api/plans/${planId}/${version}/edits`, {
      method: "POST",
      body: JSON.stringify(edits),
    });
    return resp.json();
  }

  async getTimeline(planId: string, version: number): Promise<TimelineDoc> {
    const resp = await this.request(`/api/plans/${planId}/${version}/timeline`);
    return resp.json();
  }

  async getHistory(planId: string): Promise<HistoryDoc> {
    const resp = await this.request(`/api/plans/${planId}/history`);
    return resp.json();
  }
}
