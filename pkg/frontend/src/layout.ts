/** Seeded force-directed layout.
 *
 * Deterministic by construction: node order is the caller's, the only
 * randomness is a mulberry32 stream seeded explicitly, and the
 * simulation runs a fixed number of synchronous iterations. Snapshot
 * tests rely on byte-identical positions for identical input.
 */

export interface Point {
  x: number;
  y: number;
}

export interface LayoutOptions {
  width: number;
  height: number;
  seed: number;
  iterations?: number;
  springLength?: number;
}

function mulberry32(seed: number): () => number {
  let state = seed >>> 0;
  return () => {
    state = (state + 0x6d2b79f5) >>> 0;
    let t = state;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export function computeLayout(
  nodeIds: string[],
  edges: Array<[string, string]>,
  options: LayoutOptions,
): Map<string, Point> {
  const { width, height, seed } = options;
  const iterations = options.iterations ?? 160;
  const springLength = options.springLength ?? Math.min(width, height) / 4;
  const random = mulberry32(seed);
  const count = nodeIds.length;
  const positions = new Map<string, Point>();
  if (count === 0) {
    return positions;
  }

  const xs = new Float64Array(count);
  const ys = new Float64Array(count);
  const index = new Map<string, number>();
  nodeIds.forEach((id, i) => {
    index.set(id, i);
    const angle = (2 * Math.PI * i) / count;
    const radius = Math.min(width, height) / 3;
    xs[i] = width / 2 + radius * Math.cos(angle) + (random() - 0.5) * 20;
    ys[i] = height / 2 + radius * Math.sin(angle) + (random() - 0.5) * 20;
  });

  const springs: Array<[number, number]> = [];
  for (const [a, b] of edges) {
    const ia = index.get(a);
    const ib = index.get(b);
    if (ia !== undefined && ib !== undefined && ia !== ib) {
      springs.push([ia, ib]);
    }
  }

  const repulsion = springLength * springLength;
  for (let step = 0; step < iterations; step++) {
    const cooling = 1 - step / iterations;
    const fx = new Float64Array(count);
    const fy = new Float64Array(count);

    for (let i = 0; i < count; i++) {
      for (let j = i + 1; j < count; j++) {
        let dx = xs[i] - xs[j];
        let dy = ys[i] - ys[j];
        let dist2 = dx * dx + dy * dy;
        if (dist2 < 1e-4) {
          // deterministic nudge for coincident nodes
          dx = 0.01 * (i - j);
          dy = 0.01;
          dist2 = dx * dx + dy * dy;
        }
        const force = repulsion / dist2;
        const dist = Math.sqrt(dist2);
        fx[i] += (dx / dist) * force;
        fy[i] += (dy / dist) * force;
        fx[j] -= (dx / dist) * force;
        fy[j] -= (dy / dist) * force;
      }
    }

    for (const [ia, ib] of springs) {
      const dx = xs[ib] - xs[ia];
      const dy = ys[ib] - ys[ia];
      const dist = Math.max(Math.sqrt(dx * dx + dy * dy), 1e-2);
      const force = (dist - springLength) * 0.08;
      fx[ia] += (dx / dist) * force;
      fy[ia] += (dy / dist) * force;
      fx[ib] -= (dx / dist) * force;
      fy[ib] -= (dy / dist) * force;
    }

    for (let i = 0; i < count; i++) {
      // gentle pull to the canvas center keeps components on screen
      fx[i] += (width / 2 - xs[i]) * 0.01;
      fy[i] += (height / 2 - ys[i]) * 0.01;
      const maxStep = 12 * cooling + 0.5;
      xs[i] += Math.max(-maxStep, Math.min(maxStep, fx[i] * 0.05));
      ys[i] += Math.max(-maxStep, Math.min(maxStep, fy[i] * 0.05));
    }
  }

  nodeIds.forEach((id, i) => {
    positions.set(id, { x: round2(xs[i]), y: round2(ys[i]) });
  });
  return positions;
}

function round2(value: number): number {
  return Math.round(value * 100) / 100;
}
