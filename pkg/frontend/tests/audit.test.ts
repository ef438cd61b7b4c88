// @vitest-environment node
import { readFileSync, readdirSync } from "node:fs";
import { join } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";

/**
 * Code audit: the dashboard must not perform simulation math client-side.
 * Layout arithmetic (scaling data to pixels, min/max extents) is allowed;
 * anything that could recompute dynamics, statistics, or randomness is not.
 */

const SRC_DIR = fileURLToPath(new URL("../src", import.meta.url));

const LAYOUT_MATH = new Set(["min", "max", "floor", "ceil", "round", "abs", "trunc", "sign"]);

/** Drop block and line comments so doc text cannot trip the operator scan. */
function stripComments(text: string): string {
  return text.replace(/\/\*[\s\S]*?\*\//g, "").replace(/\/\/[^\n]*/g, "");
}

function sourceFiles(): { name: string; text: string }[] {
  return readdirSync(SRC_DIR)
    .filter((name) => name.endsWith(".ts"))
    .map((name) => ({ name, text: stripComments(readFileSync(join(SRC_DIR, name), "utf8")) }));
}

describe("no client-side numeric computation", () => {
  it("scans the full dashboard source", () => {
    const names = sourceFiles().map((f) => f.name);
    for (const expected of [
      "api.ts",
      "main.ts",
      "plots.ts",
      "types.ts",
      "validation.ts",
      "whatif.ts",
    ]) {
      expect(names).toContain(expected);
    }
  });

  it("uses no transcendental or stochastic Math functions", () => {
    for (const file of sourceFiles()) {
      for (const match of file.text.matchAll(/Math\.(\w+)/g)) {
        expect(
          LAYOUT_MATH.has(match[1]),
          `${file.name} uses Math.${match[1]}, which is not layout arithmetic`,
        ).toBe(true);
      }
    }
  });

  it("uses no exponentiation operator", () => {
    for (const file of sourceFiles()) {
      expect(file.text.includes("**"), `${file.name} contains '**'`).toBe(false);
    }
  });

  it("never seeds or draws random numbers", () => {
    for (const file of sourceFiles()) {
      expect(file.text.includes("Math.random"), `${file.name} draws random numbers`).toBe(false);
      expect(file.text.includes("crypto.getRandomValues"), `${file.name} draws entropy`).toBe(
        false,
      );
    }
  });

  it("keeps summation and statistics out of the renderers", () => {
    // reduce() for numeric accumulation would be the easiest way to sneak a
    // mean or a histogram into the client; the renderers never aggregate
    for (const file of sourceFiles()) {
      expect(file.text.includes(".reduce("), `${file.name} aggregates numerically`).toBe(false);
    }
  });
});
