/** HTML and SVG string builders.
 *
 * Every renderer here returns a plain string, so the drawing logic can
 * be exercised without a browser.  main.ts drops the strings into the
 * page with innerHTML.  All displayed amounts come from service
 * responses; nothing in this module computes payments itself.
 */

import type { NetworkDoc, OutcomeSummary, NodeReport } from "./types.js";
import type { Point } from "./layout.js";
import { layoutNetwork, type LayoutEdge } from "./layout.js";
import { currency, signedCurrency, signedCount } from "./format.js";

export const DEFAULT_COLOR = "#ee6677";
export const PAID_COLOR = "#4477aa";
/** Above this many nodes the SVG becomes unreadable and slow; show the
 * sortable table instead. */
export const GRAPH_NODE_LIMIT = 2000;

const GRAPH_WIDTH = 960;
const GRAPH_HEIGHT = 640;
const MIN_RADIUS = 4;
const MAX_RADIUS = 18;

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}

function radiusScale(obligations: number[]): (value: number) => number {
  const max = Math.max(0, ...obligations);
  if (max <= 0) return () => MIN_RADIUS;
  const maxSqrt = Math.sqrt(max);
  return (value: number) =>
    MIN_RADIUS + (Math.sqrt(Math.max(0, value)) / maxSqrt) *
      (MAX_RADIUS - MIN_RADIUS);
}

function strokeScale(amounts: number[]): (value: number) => number {
  const max = Math.max(0, ...amounts);
  if (max <= 0) return () => 0.5;
  return (value: number) => 0.5 + 2.5 * (Math.max(0, value) / max);
}

function hoverText(report: NodeReport): string {
  return [
    `node ${report.id}`,
    `cash ${currency(report.funds)}`,
    `injection ${currency(report.injection)}`,
    `owes ${currency(report.obligation)}, pays ${currency(report.payment)}`,
    `shortfall ${currency(report.shortfall)}`,
  ].join("\n");
}

export interface GraphOptions {
  seed?: number;
  nodeLimit?: number;
}

/** SVG picture of the network under a clearing outcome, or a table when
 * the network is too large to draw. */
export function renderGraph(network: NetworkDoc, outcome: OutcomeSummary,
                            options: GraphOptions = {}): string {
  const limit = options.nodeLimit ?? GRAPH_NODE_LIMIT;
  if (network.nodes.length > limit) {
    return renderTable(outcome);
  }
  const index = new Map<string, number>();
  network.nodes.forEach((node, i) => index.set(node.id, i));
  const edges: LayoutEdge[] = network.liabilities.map((edge) => ({
    from: index.get(edge.from) ?? 0,
    to: index.get(edge.to) ?? 0,
    amount: edge.amount,
  }));
  const points: Point[] = layoutNetwork(network.nodes.length, edges,
                                        GRAPH_WIDTH, GRAPH_HEIGHT,
                                        options.seed ?? 1);
  const reports = new Map<string, NodeReport>();
  for (const report of outcome.nodes) reports.set(report.id, report);

  const stroke = strokeScale(edges.map((e) => e.amount));
  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" ` +
    `viewBox="0 0 ${GRAPH_WIDTH} ${GRAPH_HEIGHT}" ` +
    `class="network-graph" role="img">`,
  );
  for (const edge of edges) {
    const a = points[edge.from];
    const b = points[edge.to];
    if (!a || !b) continue;
    parts.push(
      `<line x1="${a.x.toFixed(1)}" y1="${a.y.toFixed(1)}" ` +
      `x2="${b.x.toFixed(1)}" y2="${b.y.toFixed(1)}" ` +
      `stroke="#99999988" stroke-width="${stroke(edge.amount).toFixed(2)}"/>`,
    );
  }
  const radius = radiusScale(outcome.nodes.map((r) => r.obligation));
  network.nodes.forEach((node, i) => {
    const point = points[i];
    const report = reports.get(node.id);
    if (!point || !report) return;
    const fill = report.in_default ? DEFAULT_COLOR : PAID_COLOR;
    parts.push(
      `<circle class="graph-node" data-id="${escapeHtml(node.id)}" ` +
      `cx="${point.x.toFixed(1)}" cy="${point.y.toFixed(1)}" ` +
      `r="${radius(report.obligation).toFixed(2)}" fill="${fill}">` +
      `<title>${escapeHtml(hoverText(report))}</title></circle>`,
    );
  });
  parts.push("</svg>");
  return parts.join("");
}

/** Per-node table used for very large networks and as a detail view. */
export function renderTable(outcome: OutcomeSummary): string {
  const rows = outcome.nodes.map((report) => {
    const status = report.in_default
      ? `<span class="status-default">default</span>`
      : `<span class="status-paid">paid</span>`;
    return (
      `<tr data-id="${escapeHtml(report.id)}">` +
      `<td>${escapeHtml(report.id)}</td>` +
      `<td>${currency(report.funds)}</td>` +
      `<td>${currency(report.injection)}</td>` +
      `<td>${currency(report.obligation)}</td>` +
      `<td>${currency(report.payment)}</td>` +
      `<td>${currency(report.shortfall)}</td>` +
      `<td>${status}</td></tr>`
    );
  });
  return (
    `<table class="node-table"><thead><tr>` +
    `<th>node</th><th>cash</th><th>injection</th><th>owes</th>` +
    `<th>pays</th><th>shortfall</th><th>status</th>` +
    `</tr></thead><tbody>${rows.join("")}</tbody></table>`
  );
}

export interface OutcomeDeltas {
  unpaid: number;
  defaults: number;
}

/** Headline numbers for the latest what-if, with movement against the
 * previous outcome when one exists. */
export function renderOutcomePanel(outcome: OutcomeSummary,
                                   deltas: OutcomeDeltas | null): string {
  const unpaidDelta = deltas
    ? ` <span class="delta">(${signedCurrency(deltas.unpaid)})</span>`
    : "";
  const defaultsDelta = deltas
    ? ` <span class="delta">(${signedCount(deltas.defaults)})</span>`
    : "";
  return (
    `<dl class="outcome-panel">` +
    `<dt>unpaid</dt><dd class="unpaid-total">` +
    `${currency(outcome.unpaid_total)}${unpaidDelta}</dd>` +
    `<dt>defaults</dt><dd class="default-count">` +
    `${outcome.n_defaults}${defaultsDelta}</dd>` +
    `<dt>injected</dt><dd class="injection-total">` +
    `${currency(outcome.injection_total)}</dd>` +
    `<dt>paid</dt><dd class="payments-total">` +
    `${currency(outcome.payments_total)}</dd>` +
    `</dl>`
  );
}

export interface OverlayView {
  mode: string;
  allocationTotal: number;
  entries: { id: string; amount: number }[];
  unpaidTotal: number;
  nDefaults: number;
}

/** Optimizer suggestion card: the proposed allocation and what the
 * service says it achieves. */
export function renderOverlayPanel(view: OverlayView): string {
  const rows = view.entries
    .filter((entry) => entry.amount > 0)
    .map((entry) =>
      `<tr><td>${escapeHtml(entry.id)}</td>` +
      `<td>${currency(entry.amount)}</td></tr>`)
    .join("");
  return (
    `<div class="overlay-panel">` +
    `<p class="overlay-mode">plan: ${escapeHtml(view.mode)}, ` +
    `total ${currency(view.allocationTotal)}</p>` +
    `<p class="overlay-result">unpaid ${currency(view.unpaidTotal)}, ` +
    `defaults ${view.nDefaults}</p>` +
    `<table class="overlay-entries"><thead>` +
    `<tr><th>node</th><th>amount</th></tr></thead>` +
    `<tbody>${rows}</tbody></table>` +
    `<button type="button" id="copy-overlay">copy into draft</button>` +
    `</div>`
  );
}
