/**
 * SVG renderers for server-computed payloads.
 *
 * Everything drawn here comes straight out of a response body. The only
 * arithmetic in this file is pixel layout (linear scaling, min/max for
 * extents); no dynamics are ever recomputed client-side.
 */

import type { BifurcationPayload, OccupancyPayload } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";

const WIDTH = 640;
const HEIGHT = 420;
const PAD = 24;

function clear(container: HTMLElement): void {
  while (container.firstChild) container.removeChild(container.firstChild);
}

function banner(container: HTMLElement, className: string, text: string): void {
  const div = document.createElement("div");
  div.className = className;
  div.textContent = text;
  container.appendChild(div);
}

function svgRoot(): SVGSVGElement {
  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("viewBox", `0 0 ${WIDTH} ${HEIGHT}`);
  svg.setAttribute("width", String(WIDTH));
  svg.setAttribute("height", String(HEIGHT));
  return svg;
}

function isFiniteNumber(value: unknown): value is number {
  return typeof value === "number" && Number.isFinite(value);
}

function bifurcationProblem(payload: unknown): string | null {
  if (typeof payload !== "object" || payload === null) {
    return "bifurcation payload is not an object";
  }
  const p = payload as Partial<BifurcationPayload>;
  if (!Array.isArray(p.r_values) || !Array.isArray(p.asymptotic_sets)) {
    return "bifurcation payload is missing r_values or asymptotic_sets";
  }
  if (p.r_values.length !== p.asymptotic_sets.length) {
    return "bifurcation payload lengths do not match";
  }
  if (!p.r_values.every(isFiniteNumber)) {
    return "bifurcation payload contains non-numeric r values";
  }
  if (!p.asymptotic_sets.every((s) => Array.isArray(s) && s.every(isFiniteNumber))) {
    return "bifurcation payload contains a malformed state set";
  }
  return null;
}

/**
 * Draw a bifurcation cascade. Each asymptotic state becomes one dot at
 * (r, state). A single-r payload degenerates to a vertical column, an empty
 * payload shows an empty-state message, and a malformed payload shows an
 * error banner instead of throwing.
 */
export function renderBifurcation(container: HTMLElement, payload: unknown): void {
  clear(container);
  const problem = bifurcationProblem(payload);
  if (problem !== null) {
    banner(container, "error-banner", `Could not render bifurcation: ${problem}`);
    return;
  }
  const data = payload as BifurcationPayload;
  if (data.r_values.length === 0) {
    banner(container, "empty-state", "No bifurcation data yet. Run a scan to populate this panel.");
    return;
  }

  const rMin = Math.min(...data.r_values);
  const rMax = Math.max(...data.r_values);
  const rSpan = rMax - rMin;
  const plotW = WIDTH - 2 * PAD;
  const plotH = HEIGHT - 2 * PAD;
  // states live in [0, 1] for the logistic map; keep the axis fixed so
  // panels with different r windows remain visually comparable
  const toX = (r: number): number =>
    rSpan === 0 ? PAD + plotW / 2 : PAD + ((r - rMin) / rSpan) * plotW;
  const toY = (x: number): number => PAD + (1 - x) * plotH;

  const svg = svgRoot();
  svg.setAttribute("data-plot", "bifurcation");
  for (let i = 0; i < data.r_values.length; i += 1) {
    const r = data.r_values[i];
    for (const state of data.asymptotic_sets[i]) {
      const dot = document.createElementNS(SVG_NS, "circle");
      dot.setAttribute("class", "bif-point");
      dot.setAttribute("cx", toX(r).toFixed(2));
      dot.setAttribute("cy", toY(state).toFixed(2));
      dot.setAttribute("r", "0.8");
      svg.appendChild(dot);
    }
  }
  container.appendChild(svg);
}

function occupancyProblem(payload: unknown): string | null {
  if (typeof payload !== "object" || payload === null) {
    return "occupancy payload is not an object";
  }
  const p = payload as Partial<OccupancyPayload>;
  if (!Array.isArray(p.bin_edges) || p.bin_edges.length === 0) {
    return "occupancy payload is missing bin_edges";
  }
  if (!Array.isArray(p.probabilities)) {
    return "occupancy payload is missing probabilities";
  }
  return null;
}

/** Walk a nested probability array down to a leaf by taking index 0 on
 * every axis past the first two. Slicing keeps the displayed numbers exactly
 * as the server produced them; no marginalisation happens client-side. */
function leadingSlice(value: unknown, depth: number): unknown {
  let v = value;
  for (let k = 0; k < depth; k += 1) {
    if (!Array.isArray(v)) return undefined;
    v = v[0];
  }
  return v;
}

/**
 * Draw an occupancy histogram as a shaded grid with an optional trajectory
 * overlay. Cell opacity is the cell's probability divided by the maximum
 * probability, so a constant orbit is a single solid cell and a period-2
 * orbit is two equally shaded cells. Dimension 0 runs along the horizontal
 * axis; a 2-D trajectory (rows of [x, y]) is drawn through the same bin-edge
 * window so the loop lines up with the shading. Payloads with more than two
 * dimensions show the leading two axes plus a notice.
 */
export function renderAttractor(
  container: HTMLElement,
  occupancy: unknown,
  trajectory?: unknown,
): void {
  clear(container);
  const problem = occupancyProblem(occupancy);
  if (problem !== null) {
    banner(container, "error-banner", `Could not render attractor: ${problem}`);
    return;
  }
  const data = occupancy as OccupancyPayload;
  const ndim = data.bin_edges.length;
  if (ndim > 2) {
    banner(
      container,
      "dim-notice",
      `Occupancy has ${ndim} dimensions; showing the first two (leading slice).`,
    );
  }

  const nX = data.bin_edges[0].length - 1;
  const nY = ndim >= 2 ? data.bin_edges[1].length - 1 : 1;
  if (nX < 1 || nY < 1) {
    banner(container, "error-banner", "Could not render attractor: empty bin edges");
    return;
  }

  const cells: { ix: number; iy: number; p: number }[] = [];
  for (let ix = 0; ix < nX; ix += 1) {
    for (let iy = 0; iy < nY; iy += 1) {
      let raw: unknown;
      if (ndim === 1) {
        raw = data.probabilities[ix];
      } else {
        const inner = data.probabilities[ix];
        raw = Array.isArray(inner) ? leadingSlice(inner[iy], ndim - 2) : undefined;
      }
      cells.push({ ix, iy, p: isFiniteNumber(raw) ? raw : 0 });
    }
  }

  const maxP = Math.max(0, ...cells.map((c) => c.p));
  const plotW = WIDTH - 2 * PAD;
  const plotH = HEIGHT - 2 * PAD;
  const cellW = plotW / nX;
  const cellH = plotH / nY;

  const svg = svgRoot();
  svg.setAttribute("data-plot", "attractor");
  for (const cell of cells) {
    const rect = document.createElementNS(SVG_NS, "rect");
    rect.setAttribute("class", "occupancy-cell");
    rect.setAttribute("x", (PAD + cell.ix * cellW).toFixed(2));
    // bin 0 sits at the bottom of the vertical axis
    rect.setAttribute("y", (PAD + (nY - 1 - cell.iy) * cellH).toFixed(2));
    rect.setAttribute("width", cellW.toFixed(2));
    rect.setAttribute("height", cellH.toFixed(2));
    rect.setAttribute("fill-opacity", maxP === 0 ? "0" : String(cell.p / maxP));
    rect.setAttribute("data-probability", String(cell.p));
    svg.appendChild(rect);
  }

  if (Array.isArray(trajectory) && ndim >= 2) {
    const rows = trajectory.filter(
      (row): row is number[] =>
        Array.isArray(row) && row.length >= 2 && isFiniteNumber(row[0]) && isFiniteNumber(row[1]),
    );
    if (rows.length > 1) {
      const e0 = data.bin_edges[0];
      const e1 = data.bin_edges[1];
      const x0 = e0[0];
      const xSpan = e0[e0.length - 1] - x0;
      const y0 = e1[0];
      const ySpan = e1[e1.length - 1] - y0;
      const toX = (v: number): number =>
        xSpan === 0 ? PAD + plotW / 2 : PAD + ((v - x0) / xSpan) * plotW;
      const toY = (v: number): number =>
        ySpan === 0 ? PAD + plotH / 2 : PAD + (1 - (v - y0) / ySpan) * plotH;
      const line = document.createElementNS(SVG_NS, "polyline");
      line.setAttribute("class", "trajectory-line");
      line.setAttribute("fill", "none");
      line.setAttribute(
        "points",
        rows.map((row) => `${toX(row[0]).toFixed(2)},${toY(row[1]).toFixed(2)}`).join(" "),
      );
      svg.appendChild(line);
    }
  }
  container.appendChild(svg);
}

/**
 * Draw a price path as a polyline with meltdown markers. Each meltdown event
 * index i refers to the return from step i to i+1, so the marker lands on the
 * price at index i+1.
 */
export function renderPriceSeries(
  container: HTMLElement,
  prices: number[],
  meltdownEvents: number[],
): void {
  clear(container);
  if (!Array.isArray(prices) || prices.length === 0 || !prices.every(isFiniteNumber)) {
    banner(container, "error-banner", "Could not render prices: empty or malformed series");
    return;
  }
  const pMin = Math.min(...prices);
  const pMax = Math.max(...prices);
  const span = pMax - pMin;
  const plotW = WIDTH - 2 * PAD;
  const plotH = HEIGHT - 2 * PAD;
  const denom = prices.length > 1 ? prices.length - 1 : 1;
  const toX = (i: number): number => PAD + (i / denom) * plotW;
  const toY = (p: number): number =>
    span === 0 ? PAD + plotH / 2 : PAD + (1 - (p - pMin) / span) * plotH;

  const svg = svgRoot();
  svg.setAttribute("data-plot", "prices");
  const line = document.createElementNS(SVG_NS, "polyline");
  line.setAttribute("class", "price-line");
  line.setAttribute("fill", "none");
  line.setAttribute(
    "points",
    prices.map((p, i) => `${toX(i).toFixed(2)},${toY(p).toFixed(2)}`).join(" "),
  );
  svg.appendChild(line);

  for (const event of meltdownEvents) {
    const idx = event + 1;
    if (!Number.isInteger(idx) || idx < 0 || idx >= prices.length) continue;
    const marker = document.createElementNS(SVG_NS, "circle");
    marker.setAttribute("class", "meltdown-marker");
    marker.setAttribute("cx", toX(idx).toFixed(2));
    marker.setAttribute("cy", toY(prices[idx]).toFixed(2));
    marker.setAttribute("r", "3");
    svg.appendChild(marker);
  }
  container.appendChild(svg);
}

/** Render a summary object as a definition list, values verbatim. */
export function renderScorecard(
  container: HTMLElement,
  summary: Record<string, unknown>,
): void {
  clear(container);
  const dl = document.createElement("dl");
  dl.className = "scorecard";
  for (const [key, value] of Object.entries(summary)) {
    const dt = document.createElement("dt");
    dt.textContent = key;
    const dd = document.createElement("dd");
    dd.textContent = value === null ? "n/a" : String(value);
    dd.setAttribute("data-metric", key);
    dl.appendChild(dt);
    dl.appendChild(dd);
  }
  container.appendChild(dl);
}
