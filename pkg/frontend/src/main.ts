/**
 * Dashboard entry point: builds the control strip, scenario picker, and the
 * plot/what-if panels, all backed by the HTTP service. No numbers shown on
 * this page are computed in the browser.
 */

import { ApiClient, ApiError } from "./api.js";
import {
  renderAttractor,
  renderBifurcation,
  renderPriceSeries,
  renderScorecard,
} from "./plots.js";
import { WhatIfPanel } from "./whatif.js";
import type { RunResult, ScenarioListEntry } from "./types.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className !== undefined) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function slider(
  label: string,
  min: number,
  max: number,
  step: number,
  value: number,
): { wrap: HTMLElement; input: HTMLInputElement } {
  const wrap = el("label", "slider-row");
  wrap.appendChild(el("span", "slider-label", label));
  const input = document.createElement("input");
  input.type = "range";
  input.min = String(min);
  input.max = String(max);
  input.step = String(step);
  input.value = String(value);
  const readout = el("span", "slider-value", String(value));
  input.addEventListener("input", () => {
    readout.textContent = input.value;
  });
  wrap.appendChild(input);
  wrap.appendChild(readout);
  return { wrap, input };
}

export class Dashboard {
  readonly root: HTMLElement;
  private readonly api: ApiClient;

  private readonly bifurcationPlot: HTMLElement;
  private readonly attractorPlot: HTMLElement;
  private readonly pricePlot: HTMLElement;
  private readonly scorecard: HTMLElement;
  private readonly statusLine: HTMLElement;
  private readonly scenarioSelect: HTMLSelectElement;
  private readonly whatifMount: HTMLElement;

  private rMinInput!: HTMLInputElement;
  private rMaxInput!: HTMLInputElement;
  private pointsInput!: HTMLInputElement;
  private scanPending = false;
  private runPending = false;
  private panel: WhatIfPanel | null = null;

  constructor(root: HTMLElement, api: ApiClient) {
    this.root = root;
    this.api = api;

    root.appendChild(el("h1", undefined, "Risk workbench"));
    this.statusLine = el("p", "status-line", "");
    root.appendChild(this.statusLine);

    const scanSection = el("section", "scan-controls");
    scanSection.appendChild(el("h2", undefined, "Bifurcation scan"));
    // slider bounds mirror the engine's r-domain invariant [0, 4]
    const rMin = slider("r min", 0, 4, 0.01, 2.5);
    const rMax = slider("r max", 0, 4, 0.01, 4.0);
    this.rMinInput = rMin.input;
    this.rMaxInput = rMax.input;
    scanSection.appendChild(rMin.wrap);
    scanSection.appendChild(rMax.wrap);
    const pointsRow = el("label", "slider-row");
    pointsRow.appendChild(el("span", "slider-label", "points"));
    this.pointsInput = document.createElement("input");
    this.pointsInput.type = "number";
    this.pointsInput.min = "2";
    this.pointsInput.value = "600";
    pointsRow.appendChild(this.pointsInput);
    scanSection.appendChild(pointsRow);
    const scanButton = el("button", "run-scan", "Scan");
    scanButton.type = "button";
    scanButton.addEventListener("click", () => {
      void this.scan(scanButton);
    });
    scanSection.appendChild(scanButton);
    this.bifurcationPlot = el("div", "bifurcation-plot");
    scanSection.appendChild(this.bifurcationPlot);
    root.appendChild(scanSection);

    const scenarioSection = el("section", "scenario-controls");
    scenarioSection.appendChild(el("h2", undefined, "Scenarios"));
    this.scenarioSelect = document.createElement("select");
    this.scenarioSelect.className = "scenario-select";
    this.scenarioSelect.addEventListener("change", () => {
      void this.mountPanel();
    });
    scenarioSection.appendChild(this.scenarioSelect);
    const refreshButton = el("button", "refresh-scenarios", "Refresh");
    refreshButton.type = "button";
    refreshButton.addEventListener("click", () => {
      void this.loadScenarios();
    });
    scenarioSection.appendChild(refreshButton);
    const runButton = el("button", "run-scenario", "Run");
    runButton.type = "button";
    runButton.addEventListener("click", () => {
      void this.runSelected(runButton);
    });
    scenarioSection.appendChild(runButton);
    this.whatifMount = el("div", "whatif-mount");
    scenarioSection.appendChild(this.whatifMount);
    root.appendChild(scenarioSection);

    const plots = el("section", "result-plots");
    this.scorecard = el("div", "scorecard-mount");
    this.attractorPlot = el("div", "attractor-plot");
    this.pricePlot = el("div", "price-plot");
    plots.appendChild(this.scorecard);
    plots.appendChild(this.attractorPlot);
    plots.appendChild(this.pricePlot);
    root.appendChild(plots);
  }

  async init(): Promise<void> {
    await this.loadScenarios();
  }

  async scan(button: HTMLButtonElement): Promise<void> {
    if (this.scanPending) return;
    this.scanPending = true;
    button.disabled = true;
    this.status("scanning...");
    try {
      const payload = await this.api.bifurcation(
        Number(this.rMinInput.value),
        Number(this.rMaxInput.value),
        Number(this.pointsInput.value),
      );
      renderBifurcation(this.bifurcationPlot, payload);
      this.status("");
    } catch (err) {
      this.showError(err);
    } finally {
      this.scanPending = false;
      button.disabled = false;
    }
  }

  async loadScenarios(): Promise<void> {
    try {
      const entries = await this.api.listScenarios();
      this.fillSelect(entries);
      await this.mountPanel();
      this.status("");
    } catch (err) {
      this.showError(err);
    }
  }

  private fillSelect(entries: ScenarioListEntry[]): void {
    while (this.scenarioSelect.firstChild) {
      this.scenarioSelect.removeChild(this.scenarioSelect.firstChild);
    }
    for (const entry of entries) {
      const option = document.createElement("option");
      option.value = entry.id;
      option.textContent = `${entry.name} (${entry.kind})`;
      option.setAttribute("data-kind", entry.kind);
      this.scenarioSelect.appendChild(option);
    }
  }

  private async mountPanel(): Promise<void> {
    while (this.whatifMount.firstChild) {
      this.whatifMount.removeChild(this.whatifMount.firstChild);
    }
    this.panel = null;
    const id = this.scenarioSelect.value;
    if (id === "") return;
    const record = await this.api.getScenario(id);
    const mount = el("div");
    this.whatifMount.appendChild(mount);
    this.panel = new WhatIfPanel(mount, this.api, { id: record.id, kind: record.kind });
  }

  async runSelected(button: HTMLButtonElement): Promise<void> {
    const id = this.scenarioSelect.value;
    if (id === "" || this.runPending) return;
    this.runPending = true;
    button.disabled = true;
    this.status("running...");
    try {
      const result = await this.api.runScenario(id);
      this.showRun(result);
      this.status("");
    } catch (err) {
      this.showError(err);
    } finally {
      this.runPending = false;
      button.disabled = false;
    }
  }

  private showRun(result: RunResult): void {
    renderScorecard(this.scorecard, result.summary);
    const payload = result.payload;
    if (result.kind === "LOGISTIC") {
      renderAttractor(this.attractorPlot, payload.occupancy);
    } else if (result.kind === "LOTKA_VOLTERRA") {
      renderAttractor(this.attractorPlot, payload.occupancy, payload.trajectory);
    } else if (result.kind === "MARKET") {
      const prices = Array.isArray(payload.prices) ? (payload.prices as number[]) : [];
      const events = Array.isArray(payload.meltdown_events)
        ? (payload.meltdown_events as number[])
        : [];
      renderPriceSeries(this.pricePlot, prices, events);
    }
  }

  private status(text: string): void {
    this.statusLine.textContent = text;
    this.statusLine.classList.remove("error");
  }

  private showError(err: unknown): void {
    this.statusLine.classList.add("error");
    if (err instanceof ApiError) {
      this.statusLine.textContent = `server error [${err.code}]: ${err.message}`;
    } else {
      this.statusLine.textContent = `request failed: ${String(err)}`;
    }
  }
}

export function createDashboard(root: HTMLElement, api?: ApiClient): Dashboard {
  return new Dashboard(root, api ?? new ApiClient());
}

const mountPoint = typeof document !== "undefined" ? document.getElementById("app") : null;
if (mountPoint !== null) {
  void createDashboard(mountPoint).init();
}
