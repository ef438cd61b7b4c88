import { beforeEach, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { WhatIfPanel } from "../src/whatif.js";
import { jsonResponse, mockFetch, whatIfBody } from "./helpers.js";

let root: HTMLElement;

beforeEach(() => {
  document.body.innerHTML = "";
  root = document.createElement("div");
  document.body.appendChild(root);
});

function buildPanel(
  handler: (url: string, init?: RequestInit) => Response | Promise<Response>,
  kind: "LOGISTIC" | "MARKET" = "LOGISTIC",
) {
  const { impl, calls } = mockFetch(handler);
  const panel = new WhatIfPanel(root, new ApiClient("", impl), { id: "abc123", kind });
  return { panel, calls };
}

describe("whatif_panel examples", () => {
  it("empty overrides produce a NEUTRAL badge", async () => {
    const { panel, calls } = buildPanel(() => jsonResponse(whatIfBody("NEUTRAL")));
    await panel.submit({});
    const badge = root.querySelector(".verdict-badge");
    expect(badge?.textContent).toBe("NEUTRAL");
    expect(calls).toHaveLength(1);
    expect(calls[0].url).toBe("/scenarios/abc123/whatif");
    expect(calls[0].body).toEqual({ overrides: {} });
  });

  it("an r override shows the server's RISK_UP verdict", async () => {
    const { panel, calls } = buildPanel(() =>
      jsonResponse(
        whatIfBody("RISK_UP", {
          baseline_summary: { lyapunov_exponent: -0.6931, converged: true },
          variant_summary: { lyapunov_exponent: 0.4945, converged: true },
          deltas: { lyapunov_exponent: 1.1876 },
        }),
      ),
    );
    await panel.submit({ r: 3.9 });
    expect(root.querySelector(".verdict-badge")?.textContent).toBe("RISK_UP");
    expect(calls[0].body).toEqual({ overrides: { r: 3.9 } });
    // deltas table shows the server numbers untouched
    const row = root.querySelector('tr[data-metric="lyapunov_exponent"]');
    expect(row?.textContent).toContain("1.1876");
  });

  it("an unknown parameter is rejected client-side with no request sent", async () => {
    const { panel, calls } = buildPanel(() => jsonResponse(whatIfBody("NEUTRAL")));
    await panel.submit({ growth: 2.0 });
    const message = root.querySelector(".validation-message") as HTMLElement;
    expect(message.hidden).toBe(false);
    expect(message.textContent).toContain("unknown parameter 'growth'");
    expect(calls).toHaveLength(0);
    expect(root.querySelector(".verdict-badge")?.textContent).toBe("");
  });
});

describe("verdict fidelity", () => {
  it("displays whatever verdict string the server returns, verbatim", async () => {
    const { panel } = buildPanel(() => jsonResponse(whatIfBody("RISK_SIDEWAYS")));
    await panel.submit({});
    const badge = root.querySelector(".verdict-badge");
    expect(badge?.textContent).toBe("RISK_SIDEWAYS");
    expect(badge?.getAttribute("data-verdict")).toBe("RISK_SIDEWAYS");
  });
});

describe("in-flight locking", () => {
  it("ignores submissions while a request is pending and shows a pending state", async () => {
    let release!: () => void;
    const gate = new Promise<void>((resolve) => {
      release = resolve;
    });
    const { panel, calls } = buildPanel(async () => {
      await gate;
      return jsonResponse(whatIfBody("NEUTRAL"));
    });

    const first = panel.submit({ r: 3.0 });
    expect(panel.isPending).toBe(true);
    expect(root.classList.contains("pending")).toBe(true);
    const button = root.querySelector(".run-whatif") as HTMLButtonElement;
    expect(button.disabled).toBe(true);

    // a second submission while pending must not fire a request
    await panel.submit({ r: 3.5 });
    expect(calls).toHaveLength(1);

    release();
    await first;
    expect(panel.isPending).toBe(false);
    expect(button.disabled).toBe(false);
    expect(root.classList.contains("pending")).toBe(false);
    expect(calls).toHaveLength(1);
  });
});

describe("error display", () => {
  it("shows ApiError messages inline", async () => {
    const { panel } = buildPanel(() =>
      jsonResponse({ code: "NOT_FOUND", message: "scenario abc123: not found", detail: null }, 404),
    );
    await panel.submit({});
    const banner = root.querySelector(".error-banner") as HTMLElement;
    expect(banner.hidden).toBe(false);
    expect(banner.textContent).toContain("[NOT_FOUND]");
    expect(banner.textContent).toContain("scenario abc123: not found");
    expect(panel.isPending).toBe(false);
  });
});

describe("override editor", () => {
  it("collects typed overrides as numbers", () => {
    const { panel } = buildPanel(() => jsonResponse(whatIfBody("NEUTRAL")));
    const name = root.querySelector(".ov-name") as HTMLInputElement;
    const value = root.querySelector(".ov-value") as HTMLInputElement;
    name.value = "r";
    value.value = "3.9";
    expect(panel.collectOverrides()).toEqual({ r: 3.9 });
  });

  it("skips rows with blank names so an untouched panel submits empty overrides", () => {
    const { panel } = buildPanel(() => jsonResponse(whatIfBody("NEUTRAL")));
    expect(panel.collectOverrides()).toEqual({});
  });
});

describe("countermeasures", () => {
  it("lists the server ranking in order and sends the kind's default levers", async () => {
    const ranking = {
      scenario_id: "abc123",
      primary_metric: "lyapunov_exponent",
      baseline_risk: 0.4945,
      ranking: [
        { param: "r", fraction: -0.1, value: 3.51, risk: 0.3, delta: -0.19, status: "OK", message: "" },
        { param: "x0", fraction: 0.1, value: 0.22, risk: 0.4945, delta: 0.0, status: "OK", message: "" },
      ],
      infeasible: [],
    };
    const { panel, calls } = buildPanel(() => jsonResponse(ranking));
    await panel.runCountermeasures();
    expect(calls[0].url).toBe("/scenarios/abc123/countermeasures");
    expect(calls[0].body).toEqual({ params: ["r"] });
    const items = Array.from(root.querySelectorAll(".counter-list li"));
    expect(items.map((i) => i.getAttribute("data-param"))).toEqual(["r", "x0"]);
    expect(items[0].textContent).toContain("-0.1");
    expect(root.querySelector(".baseline-risk")?.textContent).toContain("0.4945");
  });

  it("perturbs the parameters named in the override editor when present", async () => {
    const ranking = {
      scenario_id: "abc123",
      primary_metric: "meltdown_count",
      baseline_risk: 452.0,
      ranking: [],
      infeasible: [],
    };
    const { panel, calls } = buildPanel(() => jsonResponse(ranking), "MARKET");
    const name = root.querySelector(".ov-name") as HTMLInputElement;
    const value = root.querySelector(".ov-value") as HTMLInputElement;
    name.value = "liquidity";
    value.value = "2500";
    await panel.runCountermeasures();
    expect(calls[0].body).toEqual({ params: ["liquidity"] });
  });
});
