import { describe, expect, it } from "vitest";

import {
  DEFAULT_COLOR,
  PAID_COLOR,
  renderGraph,
  renderOutcomePanel,
  renderOverlayPanel,
  renderTable,
} from "../src/render.js";
import type { NetworkDoc, NodeReport, OutcomeSummary } from "../src/types.js";

function nodeReport(id: string, overrides: Partial<NodeReport> = {}): NodeReport {
  return {
    id,
    obligation: 10,
    payment: 10,
    received: 0,
    funds: 4,
    injection: 0,
    shortfall: 0,
    in_default: false,
    ...overrides,
  };
}

const network: NetworkDoc = {
  nodes: [
    { id: "bank-a", cash: 4 },
    { id: "bank-b", cash: 0 },
    { id: "bank-c", cash: 1 },
  ],
  liabilities: [
    { from: "bank-a", to: "bank-b", amount: 10 },
    { from: "bank-b", to: "bank-c", amount: 2.5 },
  ],
};

const outcome: OutcomeSummary = {
  n: 3,
  total_obligations: 12.5,
  injection_total: 1.5,
  payments_total: 8.75,
  unpaid_total: 3.75,
  n_defaults: 1,
  defaults: ["bank-a"],
  nodes: [
    nodeReport("bank-a", {
      obligation: 10, payment: 6.25, shortfall: 3.75,
      injection: 1.5, in_default: true,
    }),
    nodeReport("bank-b", { obligation: 2.5, payment: 2.5, funds: 0 }),
    nodeReport("bank-c", { obligation: 0, payment: 0, funds: 1 }),
  ],
};

function circleFor(svg: string, id: string): string {
  // The hover title spans lines, so the tail must match across newlines.
  const match = svg.match(
    new RegExp(`<circle[^>]*data-id="${id}"[^>]*>[\\s\\S]*?</circle>`));
  expect(match, `circle for ${id}`).not.toBeNull();
  return match![0];
}

function radiusOf(circle: string): number {
  const match = circle.match(/ r="([0-9.]+)"/);
  expect(match).not.toBeNull();
  return Number(match![1]);
}

describe("renderGraph", () => {
  const svg = renderGraph(network, outcome);

  it("draws one addressable circle per node", () => {
    expect(svg.match(/<circle/g)?.length ?? 0).toBe(3);
    for (const node of network.nodes) {
      circleFor(svg, node.id);
    }
  });

  it("colors defaulting nodes differently from paying ones", () => {
    expect(circleFor(svg, "bank-a")).toContain(`fill="${DEFAULT_COLOR}"`);
    expect(circleFor(svg, "bank-b")).toContain(`fill="${PAID_COLOR}"`);
    expect(circleFor(svg, "bank-c")).toContain(`fill="${PAID_COLOR}"`);
  });

  it("sizes nodes by how much they owe", () => {
    const rA = radiusOf(circleFor(svg, "bank-a"));
    const rB = radiusOf(circleFor(svg, "bank-b"));
    const rC = radiusOf(circleFor(svg, "bank-c"));
    expect(rA).toBeGreaterThan(rB);
    expect(rB).toBeGreaterThan(rC);
  });

  it("shows cash, injection, payment, and shortfall on hover", () => {
    const circle = circleFor(svg, "bank-a");
    expect(circle).toContain("<title>");
    expect(circle).toContain("cash 4.00");
    expect(circle).toContain("injection 1.50");
    expect(circle).toContain("pays 6.25");
    expect(circle).toContain("shortfall 3.75");
  });

  it("draws one line per liability with thicker strokes for larger amounts",
     () => {
       const lines = svg.match(/<line[^>]*>/g) ?? [];
       expect(lines).toHaveLength(2);
       const widths = lines.map((line) =>
         Number(line.match(/stroke-width="([0-9.]+)"/)![1]));
       expect(widths[0]).toBeGreaterThan(widths[1]!);
     });

  it("escapes node ids in markup and hover text", () => {
    const spicy: NetworkDoc = {
      nodes: [{ id: `<b>&"x"</b>`, cash: 0 }],
      liabilities: [],
    };
    const spicyOutcome: OutcomeSummary = {
      ...outcome,
      n: 1,
      nodes: [nodeReport(`<b>&"x"</b>`)],
    };
    const rendered = renderGraph(spicy, spicyOutcome);
    expect(rendered).not.toContain("<b>");
    expect(rendered).toContain("&lt;b&gt;");
  });

  it("falls back to the table when the network is too large", () => {
    const rendered = renderGraph(network, outcome, { nodeLimit: 2 });
    expect(rendered).not.toContain("<svg");
    expect(rendered).toContain("<table");
    expect(rendered).toContain("bank-a");
  });
});

describe("renderTable", () => {
  const html = renderTable(outcome);

  it("has one row per node with the settlement figures", () => {
    expect(html.match(/<tr data-id=/g)).toHaveLength(3);
    expect(html).toContain("<td>6.25</td>");
    expect(html).toContain("<td>3.75</td>");
  });

  it("labels rows by default status", () => {
    expect(html).toContain(`class="status-default"`);
    expect(html).toContain(`class="status-paid"`);
  });
});

describe("renderOutcomePanel", () => {
  it("shows the headline figures with two decimals", () => {
    const html = renderOutcomePanel(outcome, null);
    expect(html).toContain("3.75");
    expect(html).toContain(">1<");
    expect(html).toContain("1.50");
    expect(html).toContain("8.75");
    expect(html).not.toContain("delta");
  });

  it("shows signed movement against the previous settlement", () => {
    const html = renderOutcomePanel(outcome, { unpaid: -2.25, defaults: -1 });
    expect(html).toContain("-2.25");
    expect(html).toContain("(-1)");
    const up = renderOutcomePanel(outcome, { unpaid: 2.25, defaults: 2 });
    expect(up).toContain("+2.25");
    expect(up).toContain("(+2)");
  });
});

describe("renderOverlayPanel", () => {
  const html = renderOverlayPanel({
    mode: "defaults",
    allocationTotal: 6,
    entries: [
      { id: "bank-a", amount: 6 },
      { id: "bank-b", amount: 0 },
    ],
    unpaidTotal: 0,
    nDefaults: 0,
  });

  it("names the goal and the totals", () => {
    expect(html).toContain("defaults");
    expect(html).toContain("total 6.00");
    expect(html).toContain("unpaid 0.00");
  });

  it("lists only nodes that actually receive money", () => {
    expect(html).toContain("bank-a");
    expect(html).not.toContain("bank-b");
  });

  it("offers a copy button", () => {
    expect(html).toContain(`id="copy-overlay"`);
  });
});
