// Thin client for the /v1 API.  At most one analysis request is in flight:
// starting a new one aborts the previous, so a slow response can never
// overwrite a newer configuration.

import type { AnalysisResponse, DatasetMeta, ProblemJson } from "./types.js";
import type { ExplorerState } from "./state.js";
import { analysisBody } from "./state.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public problem: ProblemJson,
  ) {
    super(`${problem.code}: ${problem.message}`);
  }
}

async function parseProblem(response: Response): Promise<never> {
  let problem: ProblemJson;
  try {
    problem = (await response.json()) as ProblemJson;
  } catch {
    problem = { code: `HTTP${response.status}`, message: response.statusText, details: {} };
  }
  throw new ApiError(response.status, problem);
}

export class ApiClient {
  private inflight: AbortController | null = null;

  constructor(private base = "") {}

  async listDatasets(): Promise<DatasetMeta[]> {
    const response = await fetch(`${this.base}/v1/datasets`);
    if (!response.ok) await parseProblem(response);
    const body = (await response.json()) as { datasets: DatasetMeta[] };
    return body.datasets;
  }

  /** Runs an analysis, cancelling any still-running one. Returns null when
   * superseded by a newer request. */
  async analyze(state: ExplorerState): Promise<AnalysisResponse | null> {
    if (!state.dataset) throw new Error("no dataset selected");
    this.inflight?.abort();
    const controller = new AbortController();
    this.inflight = controller;
    let response: Response;
    try {
      response = await fetch(`${this.base}/v1/datasets/${state.dataset}/analysis`, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(analysisBody(state)),
        signal: controller.signal,
      });
    } catch (err) {
      if (controller.signal.aborted) return null;
      throw err;
    }
    if (controller.signal.aborted) return null;
    if (!response.ok) await parseProblem(response);
    return (await response.json()) as AnalysisResponse;
  }
}
