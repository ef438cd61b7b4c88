/**
 * What-if panel: edit parameter overrides, ask the server to re-run the
 * scenario, and display its verdict.
 *
 * Invariants enforced here:
 *  - unknown or out-of-range overrides are rejected client-side and no
 *    request is sent;
 *  - at most one request is in flight per panel, later submits are ignored
 *    until the current one settles;
 *  - the verdict badge shows the server's verdict string verbatim, whatever
 *    it is; this panel never recomputes or reinterprets risk.
 */

import { ApiClient, ApiError } from "./api.js";
import { parseOverrideValue, validateOverrides } from "./validation.js";
import type { ScenarioKind, WhatIfResult } from "./types.js";

export interface PanelScenario {
  id: string;
  kind: ScenarioKind;
}

/** Levers perturbed by the countermeasure button when the override editor
 * is empty; otherwise the editor's parameter names are used. */
export const DEFAULT_COUNTER_PARAMS: Record<ScenarioKind, string[]> = {
  LOGISTIC: ["r"],
  LOTKA_VOLTERRA: ["alpha", "beta"],
  MARKET: ["max_leverage", "noise_scale"],
  COMPLEXITY: ["edge_threshold"],
};

export class WhatIfPanel {
  readonly root: HTMLElement;
  private readonly api: ApiClient;
  private readonly scenario: PanelScenario;
  private pending = false;

  private readonly rows: HTMLElement;
  private readonly runButton: HTMLButtonElement;
  private readonly badge: HTMLElement;
  private readonly validationBox: HTMLElement;
  private readonly errorBox: HTMLElement;
  private readonly results: HTMLElement;
  private readonly counterButton: HTMLButtonElement;
  private readonly counterResults: HTMLElement;

  constructor(root: HTMLElement, api: ApiClient, scenario: PanelScenario) {
    this.root = root;
    this.api = api;
    this.scenario = scenario;

    root.classList.add("whatif-panel");

    this.rows = document.createElement("div");
    this.rows.className = "override-rows";
    root.appendChild(this.rows);

    const addButton = document.createElement("button");
    addButton.type = "button";
    addButton.className = "add-override";
    addButton.textContent = "Add override";
    addButton.addEventListener("click", () => this.addRow());
    root.appendChild(addButton);

    this.runButton = document.createElement("button");
    this.runButton.type = "button";
    this.runButton.className = "run-whatif";
    this.runButton.textContent = "Run what-if";
    this.runButton.addEventListener("click", () => {
      void this.submit();
    });
    root.appendChild(this.runButton);

    this.badge = document.createElement("span");
    this.badge.className = "verdict-badge";
    root.appendChild(this.badge);

    this.validationBox = document.createElement("div");
    this.validationBox.className = "validation-message";
    this.validationBox.hidden = true;
    root.appendChild(this.validationBox);

    this.errorBox = document.createElement("div");
    this.errorBox.className = "error-banner";
    this.errorBox.hidden = true;
    root.appendChild(this.errorBox);

    this.results = document.createElement("div");
    this.results.className = "whatif-results";
    root.appendChild(this.results);

    this.counterButton = document.createElement("button");
    this.counterButton.type = "button";
    this.counterButton.className = "run-counter";
    this.counterButton.textContent = "Rank countermeasures";
    this.counterButton.addEventListener("click", () => {
      void this.runCountermeasures();
    });
    root.appendChild(this.counterButton);

    this.counterResults = document.createElement("div");
    this.counterResults.className = "counter-results";
    root.appendChild(this.counterResults);

    this.addRow();
  }

  get isPending(): boolean {
    return this.pending;
  }

  addRow(name = "", value = ""): void {
    const row = document.createElement("div");
    row.className = "override-row";
    const nameInput = document.createElement("input");
    nameInput.className = "ov-name";
    nameInput.placeholder = "parameter";
    nameInput.value = name;
    const valueInput = document.createElement("input");
    valueInput.className = "ov-value";
    valueInput.placeholder = "value";
    valueInput.value = value;
    row.appendChild(nameInput);
    row.appendChild(valueInput);
    this.rows.appendChild(row);
  }

  /** Read the override editor into a plain object. Blank names are skipped
   * so an untouched panel submits an empty override set. */
  collectOverrides(): Record<string, unknown> {
    const overrides: Record<string, unknown> = {};
    for (const row of Array.from(this.rows.querySelectorAll(".override-row"))) {
      const nameInput = row.querySelector<HTMLInputElement>(".ov-name");
      const valueInput = row.querySelector<HTMLInputElement>(".ov-value");
      if (!nameInput || !valueInput) continue;
      const key = nameInput.value.trim();
      if (key === "") continue;
      overrides[key] = parseOverrideValue(this.scenario.kind, key, valueInput.value.trim());
    }
    return overrides;
  }

  /** Submit the given overrides (or the editor contents when omitted). */
  async submit(overrides?: Record<string, unknown>): Promise<void> {
    if (this.pending) return;
    const payload = overrides ?? this.collectOverrides();

    this.clearMessages();
    const verdictOfForm = validateOverrides(this.scenario.kind, payload);
    if (!verdictOfForm.ok) {
      this.validationBox.hidden = false;
      this.validationBox.textContent = verdictOfForm.errors.join("; ");
      return;
    }

    this.setPending(true);
    try {
      const result = await this.api.whatIf(this.scenario.id, payload);
      this.showResult(result);
    } catch (err) {
      this.showError(err);
    } finally {
      this.setPending(false);
    }
  }

  async runCountermeasures(): Promise<void> {
    if (this.pending) return;
    this.clearMessages();
    const typed = Object.keys(this.collectOverrides());
    const params = typed.length > 0 ? typed : DEFAULT_COUNTER_PARAMS[this.scenario.kind];
    this.setPending(true);
    try {
      const ranking = await this.api.countermeasures(this.scenario.id, params);
      this.showCountermeasures(ranking.ranking, ranking.baseline_risk);
    } catch (err) {
      this.showError(err);
    } finally {
      this.setPending(false);
    }
  }

  private setPending(pending: boolean): void {
    this.pending = pending;
    this.runButton.disabled = pending;
    this.counterButton.disabled = pending;
    this.root.classList.toggle("pending", pending);
  }

  private clearMessages(): void {
    this.validationBox.hidden = true;
    this.validationBox.textContent = "";
    this.errorBox.hidden = true;
    this.errorBox.textContent = "";
  }

  private showResult(result: WhatIfResult): void {
    // verdict is displayed exactly as the server spelled it
    this.badge.textContent = result.verdict;
    this.badge.setAttribute("data-verdict", result.verdict);

    while (this.results.firstChild) this.results.removeChild(this.results.firstChild);
    const table = document.createElement("table");
    table.className = "delta-table";
    const header = document.createElement("tr");
    for (const label of ["metric", "baseline", "variant", "delta"]) {
      const th = document.createElement("th");
      th.textContent = label;
      header.appendChild(th);
    }
    table.appendChild(header);
    for (const [metric, delta] of Object.entries(result.deltas)) {
      const tr = document.createElement("tr");
      tr.setAttribute("data-metric", metric);
      const cells = [
        metric,
        String(result.baseline_summary[metric]),
        String(result.variant_summary[metric]),
        String(delta),
      ];
      for (const text of cells) {
        const td = document.createElement("td");
        td.textContent = text;
        tr.appendChild(td);
      }
      table.appendChild(tr);
    }
    this.results.appendChild(table);
  }

  private showCountermeasures(
    candidates: { param: string; fraction: number; risk: number | null; delta: number | null }[],
    baselineRisk: number,
  ): void {
    while (this.counterResults.firstChild) {
      this.counterResults.removeChild(this.counterResults.firstChild);
    }
    const caption = document.createElement("p");
    caption.className = "baseline-risk";
    caption.textContent = `baseline risk: ${String(baselineRisk)}`;
    this.counterResults.appendChild(caption);
    const list = document.createElement("ol");
    list.className = "counter-list";
    for (const cand of candidates) {
      const item = document.createElement("li");
      item.setAttribute("data-param", cand.param);
      item.textContent =
        `${cand.param} ${String(cand.fraction)}: risk ${String(cand.risk)} ` +
        `(delta ${String(cand.delta)})`;
      list.appendChild(item);
    }
    this.counterResults.appendChild(list);
  }

  private showError(err: unknown): void {
    this.errorBox.hidden = false;
    if (err instanceof ApiError) {
      this.errorBox.textContent = `server error [${err.code}]: ${err.message}`;
    } else {
      this.errorBox.textContent = `request failed: ${String(err)}`;
    }
  }
}
