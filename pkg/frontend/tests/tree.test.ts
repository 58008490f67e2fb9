import { describe, expect, it } from "vitest";

import { fullRepairBudget, treeNetworkDoc } from "../src/tree.js";

describe("treeNetworkDoc", () => {
  it("builds the smallest tree: one borrower owing two leaves", () => {
    const doc = treeNetworkDoc(2);
    expect(doc.nodes).toEqual([
      { id: "0", cash: 0 },
      { id: "1", cash: 0 },
      { id: "2", cash: 0 },
    ]);
    expect(doc.liabilities).toEqual([
      { from: "0", to: "1", amount: 4 },
      { from: "0", to: "2", amount: 4 },
    ]);
  });

  it("doubles the owed amount per level toward the root", () => {
    const doc = treeNetworkDoc(4);
    const amountFrom = (id: string) =>
      doc.liabilities.find((edge) => edge.from === id)?.amount;
    expect(amountFrom("0")).toBe(16);  // root, level 0
    expect(amountFrom("1")).toBe(8);   // level 1
    expect(amountFrom("3")).toBe(4);   // level 2, deepest borrowers
  });

  it("matches the 10-level reference network", () => {
    const doc = treeNetworkDoc(10);
    expect(doc.nodes).toHaveLength(1023);
    expect(doc.liabilities).toHaveLength(2 * 511);
    const rootEdges = doc.liabilities.filter((edge) => edge.from === "0");
    expect(rootEdges).toEqual([
      { from: "0", to: "1", amount: 1024 },
      { from: "0", to: "2", amount: 1024 },
    ]);
    const total = doc.liabilities.reduce((sum, edge) => sum + edge.amount, 0);
    expect(total).toBe(18432);
    const deepest = doc.liabilities.filter((edge) => edge.amount === 4);
    expect(deepest).toHaveLength(2 * 256);
    expect(doc.nodes.every((node) => node.cash === 0)).toBe(true);
  });

  it("rejects degenerate sizes", () => {
    expect(() => treeNetworkDoc(1)).toThrow(/at least 2 levels/);
    expect(() => treeNetworkDoc(2.5)).toThrow(/at least 2 levels/);
  });
});

describe("fullRepairBudget", () => {
  it("is the root injection that repairs the whole tree", () => {
    expect(fullRepairBudget(10)).toBe(2048);
    expect(fullRepairBudget(2)).toBe(8);
  });
});
