/** Built-in demo network: the binary-tree stress case.
 *
 * Mirrors the service side's generator: breadth-first node ids, node
 * ``i`` owes each of its children ``2i+1`` and ``2i+2`` an amount of
 * ``2 ** (levels - level)``, and nobody holds cash.  Having it in the
 * client gives the UI a one-click dataset without shipping a file.
 */

import type { NetworkDoc } from "./types.js";

export function treeNetworkDoc(levels: number): NetworkDoc {
  if (!Number.isInteger(levels) || levels < 2) {
    throw new Error("a tree needs at least 2 levels");
  }
  const nodeCount = 2 ** levels - 1;
  const borrowerCount = 2 ** (levels - 1) - 1;
  const doc: NetworkDoc = {
    nodes: Array.from({ length: nodeCount },
                      (_, i) => ({ id: String(i), cash: 0 })),
    liabilities: [],
  };
  for (let i = 0; i < borrowerCount; i++) {
    const level = 31 - Math.clz32(i + 1);
    const amount = 2 ** (levels - level);
    doc.liabilities.push({ from: String(i), to: String(2 * i + 1), amount });
    doc.liabilities.push({ from: String(i), to: String(2 * i + 2), amount });
  }
  return doc;
}

/** Injection that repairs the whole tree when placed at the root. */
export function fullRepairBudget(levels: number): number {
  return 2 ** (levels + 1);
}
