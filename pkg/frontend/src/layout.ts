/** Node placement.
 *
 * Networks whose liability edges form a forest (each node has at most
 * one creditor pointing at it and no cycles) get a layered layout:
 * creditors above their debtors' beneficiaries, one row per depth.
 * That covers the binary-tree stress network.  Everything else gets a
 * small force simulation seeded deterministically, so the same network
 * always lands in the same picture.
 */

export interface Point {
  x: number;
  y: number;
}

export interface LayoutEdge {
  from: number;
  to: number;
  amount: number;
}

const MARGIN = 40;
const FORCE_ITERATIONS = 120;
/** Beyond this the quadratic force pass is too slow; fall back to a
 * deterministic ring. */
const FORCE_NODE_LIMIT = 600;

/** Multiplicative congruential PRNG; deterministic across runs. */
function makeRng(seed: number): () => number {
  let s = seed >>> 0;
  return () => {
    s = (s + 0x6d2b79f5) >>> 0;
    let t = s;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export function isForest(nodeCount: number, edges: LayoutEdge[]): boolean {
  const inDegree = new Array<number>(nodeCount).fill(0);
  const children: number[][] = Array.from({ length: nodeCount }, () => []);
  for (const edge of edges) {
    inDegree[edge.to] = (inDegree[edge.to] ?? 0) + 1;
    if ((inDegree[edge.to] ?? 0) > 1) return false;
    children[edge.from]?.push(edge.to);
  }
  // In-degrees are all <= 1; a cycle would leave no root to reach it.
  const seen = new Array<boolean>(nodeCount).fill(false);
  const stack: number[] = [];
  for (let i = 0; i < nodeCount; i++) {
    if (inDegree[i] === 0) stack.push(i);
  }
  let visited = 0;
  while (stack.length > 0) {
    const node = stack.pop()!;
    if (seen[node]) continue;
    seen[node] = true;
    visited += 1;
    for (const child of children[node] ?? []) stack.push(child);
  }
  return visited === nodeCount;
}

function layeredLayout(nodeCount: number, edges: LayoutEdge[],
                       width: number, height: number): Point[] {
  const children: number[][] = Array.from({ length: nodeCount }, () => []);
  const inDegree = new Array<number>(nodeCount).fill(0);
  for (const edge of edges) {
    children[edge.from]?.push(edge.to);
    inDegree[edge.to] = (inDegree[edge.to] ?? 0) + 1;
  }
  const depth = new Array<number>(nodeCount).fill(0);
  const order: number[] = [];
  for (let i = 0; i < nodeCount; i++) {
    if (inDegree[i] === 0) order.push(i);
  }
  for (let head = 0; head < order.length; head++) {
    const node = order[head]!;
    for (const child of children[node] ?? []) {
      depth[child] = (depth[node] ?? 0) + 1;
      order.push(child);
    }
  }
  const rows = new Map<number, number[]>();
  for (const node of order) {
    const d = depth[node] ?? 0;
    const row = rows.get(d);
    if (row) row.push(node);
    else rows.set(d, [node]);
  }
  const maxDepth = Math.max(0, ...rows.keys());
  const points = new Array<Point>(nodeCount);
  for (const [d, row] of rows) {
    const y = maxDepth === 0
      ? height / 2
      : MARGIN + (d / maxDepth) * (height - 2 * MARGIN);
    row.forEach((node, index) => {
      const x = MARGIN + ((index + 0.5) / row.length) * (width - 2 * MARGIN);
      points[node] = { x, y };
    });
  }
  return points;
}

function ringLayout(nodeCount: number, width: number,
                    height: number): Point[] {
  const cx = width / 2;
  const cy = height / 2;
  const radius = Math.min(width, height) / 2 - MARGIN;
  return Array.from({ length: nodeCount }, (_, i) => {
    const angle = (2 * Math.PI * i) / nodeCount - Math.PI / 2;
    return { x: cx + radius * Math.cos(angle), y: cy + radius * Math.sin(angle) };
  });
}

function forceLayout(nodeCount: number, edges: LayoutEdge[], width: number,
                     height: number, seed: number): Point[] {
  if (nodeCount > FORCE_NODE_LIMIT) {
    return ringLayout(nodeCount, width, height);
  }
  const rng = makeRng(seed);
  const xs = new Array<number>(nodeCount);
  const ys = new Array<number>(nodeCount);
  for (let i = 0; i < nodeCount; i++) {
    xs[i] = MARGIN + rng() * (width - 2 * MARGIN);
    ys[i] = MARGIN + rng() * (height - 2 * MARGIN);
  }
  const area = (width - 2 * MARGIN) * (height - 2 * MARGIN);
  const k = Math.sqrt(area / Math.max(1, nodeCount));
  for (let iter = 0; iter < FORCE_ITERATIONS; iter++) {
    const fx = new Array<number>(nodeCount).fill(0);
    const fy = new Array<number>(nodeCount).fill(0);
    for (let i = 0; i < nodeCount; i++) {
      for (let j = i + 1; j < nodeCount; j++) {
        let dx = xs[i]! - xs[j]!;
        let dy = ys[i]! - ys[j]!;
        let dist = Math.hypot(dx, dy);
        if (dist < 1e-6) {
          dx = 1e-3 * (1 + i - j);
          dy = 1e-3;
          dist = Math.hypot(dx, dy);
        }
        const repulse = (k * k) / dist;
        fx[i]! += (dx / dist) * repulse;
        fy[i]! += (dy / dist) * repulse;
        fx[j]! -= (dx / dist) * repulse;
        fy[j]! -= (dy / dist) * repulse;
      }
    }
    for (const edge of edges) {
      const i = edge.from;
      const j = edge.to;
      let dx = xs[i]! - xs[j]!;
      let dy = ys[i]! - ys[j]!;
      let dist = Math.hypot(dx, dy);
      if (dist < 1e-6) dist = 1e-6;
      const attract = (dist * dist) / k;
      fx[i]! -= (dx / dist) * attract;
      fy[i]! -= (dy / dist) * attract;
      fx[j]! += (dx / dist) * attract;
      fy[j]! += (dy / dist) * attract;
    }
    const temperature = 0.1 * Math.min(width, height) *
      (1 - iter / FORCE_ITERATIONS);
    for (let i = 0; i < nodeCount; i++) {
      const magnitude = Math.hypot(fx[i]!, fy[i]!);
      if (magnitude < 1e-9) continue;
      const step = Math.min(magnitude, temperature);
      xs[i] = xs[i]! + (fx[i]! / magnitude) * step;
      ys[i] = ys[i]! + (fy[i]! / magnitude) * step;
      xs[i] = Math.max(MARGIN, Math.min(width - MARGIN, xs[i]!));
      ys[i] = Math.max(MARGIN, Math.min(height - MARGIN, ys[i]!));
    }
  }
  return Array.from({ length: nodeCount }, (_, i) => ({ x: xs[i]!, y: ys[i]! }));
}

export function layoutNetwork(nodeCount: number, edges: LayoutEdge[],
                              width: number, height: number,
                              seed = 1): Point[] {
  if (nodeCount === 0) return [];
  if (isForest(nodeCount, edges)) {
    return layeredLayout(nodeCount, edges, width, height);
  }
  return forceLayout(nodeCount, edges, width, height, seed);
}
