/** Wire types mirroring the server's JSON payloads, field for field. */

export type ScenarioKind = "LOGISTIC" | "LOTKA_VOLTERRA" | "MARKET" | "COMPLEXITY";

export type Verdict = "RISK_UP" | "RISK_DOWN" | "NEUTRAL";

export interface ApiErrorBody {
  code: "VALIDATION" | "NOT_FOUND" | "SIM_DIVERGED" | "DEGENERATE_INPUT" | "INTERNAL";
  message: string;
  detail: string | null;
}

export interface BifurcationPayload {
  r_values: number[];
  asymptotic_sets: number[][];
  detected_period: (number | string)[];
}

export interface LyapunovPayload {
  exponent: number;
  n_samples: number;
  converged: boolean;
}

export interface OccupancyPayload {
  bin_edges: number[][];
  // 1-D histograms carry number[]; d-D histograms nest d levels deep
  probabilities: unknown[];
}

export interface ScenarioRecord {
  id: string;
  name: string;
  kind: ScenarioKind;
  config: Record<string, unknown>;
  created_at: string;
  version: number;
}

export interface ScenarioListEntry {
  id: string;
  name: string;
  kind: ScenarioKind;
  created_at: string;
}

export interface RunResult {
  scenario_id: string;
  kind: ScenarioKind;
  summary: Record<string, number | string | boolean | null>;
  payload: Record<string, unknown>;
}

export interface WhatIfResult {
  scenario_id: string;
  primary_metric: string;
  baseline_summary: Record<string, number | string | boolean | null>;
  variant_summary: Record<string, number | string | boolean | null>;
  deltas: Record<string, number>;
  verdict: Verdict;
}

export interface CountermeasureCandidate {
  param: string;
  fraction: number;
  value: number | null;
  risk: number | null;
  delta: number | null;
  status: "OK" | "INFEASIBLE";
  message: string;
}

export interface CountermeasureRanking {
  scenario_id: string;
  primary_metric: string;
  baseline_risk: number;
  ranking: CountermeasureCandidate[];
  infeasible: CountermeasureCandidate[];
}

export interface ComplexityReport {
  channel_names: string[];
  correlation_matrix: number[][];
  edge_set: [string, string][];
  edge_threshold: number;
  score: number;
  fragility_band: "LOW" | "MEDIUM" | "HIGH";
  dropped_channels: string[];
}

export interface MarketRunPayload {
  meltdown_count: number;
  meltdown_events: number[];
  final_price: number;
  n_steps: number;
  config: Record<string, unknown>;
  prices?: number[];
  log_returns?: number[];
  agent_wealth?: number[];
}
