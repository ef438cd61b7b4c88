import type { FetchLike } from "../src/api.js";
import type { WhatIfResult } from "../src/types.js";

export interface RecordedCall {
  url: string;
  method: string;
  body: unknown;
}

export function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

/** Fetch stand-in that records every call and delegates to a handler. */
export function mockFetch(
  handler: (url: string, init?: RequestInit) => Response | Promise<Response>,
): { impl: FetchLike; calls: RecordedCall[] } {
  const calls: RecordedCall[] = [];
  const impl: FetchLike = async (url, init) => {
    calls.push({
      url,
      method: init?.method ?? "GET",
      body: typeof init?.body === "string" ? JSON.parse(init.body) : null,
    });
    return handler(url, init);
  };
  return { impl, calls };
}

export function whatIfBody(verdict: string, overrides: Partial<WhatIfResult> = {}): WhatIfResult {
  return {
    scenario_id: "abc123",
    primary_metric: "lyapunov_exponent",
    baseline_summary: { lyapunov_exponent: 0.4945, converged: true },
    variant_summary: { lyapunov_exponent: 0.4945, converged: true },
    deltas: { lyapunov_exponent: 0.0 },
    verdict: verdict as WhatIfResult["verdict"],
    ...overrides,
  };
}
