/**
 * Thin HTTP client for the risk service.
 *
 * Every number shown in the dashboard is computed server-side; this module
 * only moves JSON across the wire. The fetch implementation is injectable so
 * tests can run without a network.
 */

import type {
  ApiErrorBody,
  BifurcationPayload,
  CountermeasureRanking,
  LyapunovPayload,
  RunResult,
  ScenarioKind,
  ScenarioListEntry,
  ScenarioRecord,
  WhatIfResult,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

/** Raised when the server answers with a structured error body. */
export class ApiError extends Error {
  readonly code: string;
  readonly status: number;
  readonly detail: string | null;

  constructor(status: number, body: ApiErrorBody) {
    super(body.message);
    this.name = "ApiError";
    this.status = status;
    this.code = body.code;
    this.detail = body.detail;
  }
}

async function parseError(response: Response): Promise<ApiError> {
  // the service answers errors with a flat {code, message, detail} body
  const fallback: ApiErrorBody = {
    code: "INTERNAL",
    message: `HTTP ${response.status}`,
    detail: null,
  };
  let body = fallback;
  try {
    const raw = (await response.json()) as Partial<ApiErrorBody> | null;
    if (raw !== null && typeof raw.code === "string" && typeof raw.message === "string") {
      body = { code: raw.code, message: raw.message, detail: raw.detail ?? null } as ApiErrorBody;
    }
  } catch {
    // non-JSON error body, keep the fallback
  }
  return new ApiError(response.status, body);
}

export class ApiClient {
  private readonly baseUrl: string;
  private readonly fetchImpl: FetchLike;

  constructor(baseUrl = "", fetchImpl?: FetchLike) {
    // strip one trailing slash so path joins stay predictable
    this.baseUrl = baseUrl.endsWith("/") ? baseUrl.slice(0, -1) : baseUrl;
    this.fetchImpl = fetchImpl ?? ((url, init) => fetch(url, init));
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(this.baseUrl + path, init);
    if (!response.ok) {
      throw await parseError(response);
    }
    return (await response.json()) as T;
  }

  health(): Promise<{ status: string }> {
    return this.request("/health");
  }

  bifurcation(
    rMin: number,
    rMax: number,
    rCount: number,
    options: { x0?: number; nTransient?: number } = {},
  ): Promise<BifurcationPayload> {
    const params = new URLSearchParams({
      r_min: String(rMin),
      r_max: String(rMax),
      r_count: String(rCount),
    });
    if (options.x0 !== undefined) params.set("x0", String(options.x0));
    if (options.nTransient !== undefined) {
      params.set("n_transient", String(options.nTransient));
    }
    return this.request(`/dynamics/bifurcation?${params}`);
  }

  lyapunov(r: number, method: "derivative" | "twin" = "derivative"): Promise<LyapunovPayload> {
    const params = new URLSearchParams({ r: String(r), method });
    return this.request(`/dynamics/lyapunov?${params}`);
  }

  listScenarios(): Promise<ScenarioListEntry[]> {
    return this.request("/scenarios");
  }

  getScenario(id: string): Promise<ScenarioRecord> {
    return this.request(`/scenarios/${encodeURIComponent(id)}`);
  }

  createScenario(
    name: string,
    kind: ScenarioKind,
    config: Record<string, unknown>,
  ): Promise<ScenarioRecord> {
    return this.request("/scenarios", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ name, kind, config }),
    });
  }

  runScenario(id: string, seed?: number): Promise<RunResult> {
    return this.request(`/scenarios/${encodeURIComponent(id)}/run`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(seed === undefined ? {} : { seed }),
    });
  }

  whatIf(id: string, overrides: Record<string, unknown>): Promise<WhatIfResult> {
    return this.request(`/scenarios/${encodeURIComponent(id)}/whatif`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ overrides }),
    });
  }

  countermeasures(
    id: string,
    params: string[],
    options: { fractions?: number[]; seeds?: number[] } = {},
  ): Promise<CountermeasureRanking> {
    // the service requires an explicit list of tunable parameters
    const body: Record<string, unknown> = { params };
    if (options.fractions !== undefined) body.fractions = options.fractions;
    if (options.seeds !== undefined) body.seeds = options.seeds;
    return this.request(`/scenarios/${encodeURIComponent(id)}/countermeasures`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
  }
}
