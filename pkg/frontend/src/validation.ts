/**
 * Client-side form validation.
 *
 * These schemas exist to give fast feedback and to keep obviously malformed
 * requests off the wire; the server re-validates everything. Ranges mirror
 * the engine's own domain constraints, they are not invented here.
 */

import type { ScenarioKind } from "./types.js";

export interface ParamSpec {
  name: string;
  label: string;
  min: number | null;
  max: number | null;
  integer: boolean;
}

/** Slider/input ranges per scenario kind. r spans the full logistic domain. */
export const PARAM_SPECS: Record<ScenarioKind, ParamSpec[]> = {
  LOGISTIC: [
    { name: "r", label: "growth rate r", min: 0, max: 4, integer: false },
    { name: "x0", label: "initial state x0", min: 0, max: 1, integer: false },
    { name: "n_transient", label: "transient steps", min: 0, max: null, integer: true },
    { name: "n_keep", label: "kept steps", min: 1, max: null, integer: true },
  ],
  LOTKA_VOLTERRA: [
    { name: "alpha", label: "prey growth", min: 0, max: null, integer: false },
    { name: "beta", label: "predation rate", min: 0, max: null, integer: false },
    { name: "gamma", label: "predator death", min: 0, max: null, integer: false },
    { name: "delta", label: "conversion rate", min: 0, max: null, integer: false },
    { name: "x0", label: "initial prey", min: 0, max: null, integer: false },
    { name: "y0", label: "initial predators", min: 0, max: null, integer: false },
    { name: "dt", label: "time step", min: 0, max: null, integer: false },
    { name: "steps", label: "steps", min: 1, max: null, integer: true },
  ],
  MARKET: [
    { name: "seed", label: "seed", min: 0, max: null, integer: true },
    { name: "steps", label: "steps", min: 1, max: null, integer: true },
    { name: "n_fundamentalists", label: "fundamentalists", min: 0, max: null, integer: true },
    { name: "n_chartists", label: "chartists", min: 0, max: null, integer: true },
    { name: "fundamental_value", label: "fundamental value", min: 0, max: null, integer: false },
    { name: "initial_price", label: "initial price", min: 0, max: null, integer: false },
    { name: "max_leverage", label: "max leverage", min: 0, max: null, integer: false },
    { name: "liquidity", label: "liquidity", min: 0, max: null, integer: false },
    { name: "noise_scale", label: "noise scale", min: 0, max: null, integer: false },
    { name: "meltdown_threshold", label: "meltdown threshold", min: null, max: 0, integer: false },
  ],
  COMPLEXITY: [
    { name: "edge_threshold", label: "edge threshold", min: 0, max: 1, integer: false },
  ],
};

const STRING_PARAMS: Record<ScenarioKind, string[]> = {
  LOGISTIC: [],
  LOTKA_VOLTERRA: [],
  MARKET: [],
  COMPLEXITY: ["csv_path", "mode"],
};

export interface ValidationResult {
  ok: boolean;
  errors: string[];
}

function specFor(kind: ScenarioKind, name: string): ParamSpec | undefined {
  return PARAM_SPECS[kind].find((s) => s.name === name);
}

export function knownParams(kind: ScenarioKind): string[] {
  return [...PARAM_SPECS[kind].map((s) => s.name), ...STRING_PARAMS[kind]];
}

/**
 * Validate what-if overrides before any request is made. Unknown parameter
 * names are rejected here so the server never sees them.
 */
export function validateOverrides(
  kind: ScenarioKind,
  overrides: Record<string, unknown>,
): ValidationResult {
  const errors: string[] = [];
  for (const [name, value] of Object.entries(overrides)) {
    if (STRING_PARAMS[kind].includes(name)) {
      if (typeof value !== "string") {
        errors.push(`parameter '${name}' expects a text value`);
      }
      continue;
    }
    const spec = specFor(kind, name);
    if (spec === undefined) {
      errors.push(`unknown parameter '${name}' for kind ${kind}`);
      continue;
    }
    if (typeof value !== "number" || !Number.isFinite(value)) {
      errors.push(`parameter '${name}' must be a finite number`);
      continue;
    }
    if (spec.integer && !Number.isInteger(value)) {
      errors.push(`parameter '${name}' must be an integer`);
    }
    if (spec.min !== null && value < spec.min) {
      errors.push(`parameter '${name}' must be >= ${spec.min}`);
    }
    if (spec.max !== null && value > spec.max) {
      errors.push(`parameter '${name}' must be <= ${spec.max}`);
    }
  }
  return { ok: errors.length === 0, errors };
}

/** Parse a text-field override into a number or string, kind-aware. */
export function parseOverrideValue(
  kind: ScenarioKind,
  name: string,
  raw: string,
): unknown {
  if (STRING_PARAMS[kind].includes(name)) return raw;
  const value = Number(raw);
  return Number.isNaN(value) ? raw : value;
}
