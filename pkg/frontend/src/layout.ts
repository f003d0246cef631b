/** Deterministic zone-clustered force layout.
 *
 * Seeded from a hash of the rendered documents, so the same graph always
 * lands in the same positions (stable screenshots, stable tests).
 */

export interface NodePosition {
  x: number;
  y: number;
}

export interface ZoneBox {
  zoneId: string;
  x: number;
  y: number;
  width: number;
  height: number;
}

export interface Layout {
  positions: Record<string, NodePosition>;
  zoneBoxes: ZoneBox[];
  width: number;
  height: number;
}

export function fnv1a(text: string): number {
  let hash = 0x811c9dc5;
  for (let i = 0; i < text.length; i++) {
    hash ^= text.charCodeAt(i);
    hash = Math.imul(hash, 0x01000193);
  }
  return hash >>> 0;
}

/** mulberry32: small deterministic PRNG. */
export function seededRandom(seed: number): () => number {
  let state = seed >>> 0;
  return () => {
    state = (state + 0x6d2b79f5) >>> 0;
    let t = state;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

const WIDTH = 960;
const HEIGHT = 640;
const ITERATIONS = 120;
const NODE_PADDING = 46;

export function computeLayout(
  nodes: string[],
  edges: [string, string][],
  zoneOf: Record<string, string>,
  seedText: string,
): Layout {
  const rand = seededRandom(fnv1a(seedText));
  const zoneIds = [...new Set(nodes.map((n) => zoneOf[n] ?? ''))].sort();

  // zone anchor centers spread on a grid
  const columns = Math.max(1, Math.ceil(Math.sqrt(zoneIds.length)));
  const rows = Math.max(1, Math.ceil(zoneIds.length / columns));
  const anchors: Record<string, NodePosition> = {};
  zoneIds.forEach((zoneId, i) => {
    const col = i % columns;
    const row = Math.floor(i / columns);
    anchors[zoneId] = {
      x: ((col + 0.5) / columns) * WIDTH,
      y: ((row + 0.5) / rows) * HEIGHT,
    };
  });

  const positions: Record<string, NodePosition> = {};
  const ordered = [...nodes].sort();
  for (const node of ordered) {
    const anchor = anchors[zoneOf[node] ?? ''];
    positions[node] = {
      x: anchor.x + (rand() - 0.5) * 120,
      y: anchor.y + (rand() - 0.5) * 120,
    };
  }

  const laterals = edges.filter(([a, b]) => a !== b);
  for (let step = 0; step < ITERATIONS; step++) {
    const cooling = 1 - step / ITERATIONS;
    // pairwise repulsion
    for (let i = 0; i < ordered.length; i++) {
      for (let j = i + 1; j < ordered.length; j++) {
        const a = positions[ordered[i]];
        const b = positions[ordered[j]];
        let dx = a.x - b.x;
        let dy = a.y - b.y;
        const d2 = Math.max(dx * dx + dy * dy, 1);
        const force = (2600 / d2) * cooling;
        const d = Math.sqrt(d2);
        dx /= d;
        dy /= d;
        a.x += dx * force;
        a.y += dy * force;
        b.x -= dx * force;
        b.y -= dy * force;
      }
    }
    // spring along exploit edges
    for (const [from, to] of laterals) {
      const a = positions[from];
      const b = positions[to];
      if (!a || !b) continue;
      const dx = b.x - a.x;
      const dy = b.y - a.y;
      const d = Math.max(Math.sqrt(dx * dx + dy * dy), 1);
      const pull = ((d - 140) / d) * 0.04 * cooling;
      a.x += dx * pull;
      a.y += dy * pull;
      b.x -= dx * pull;
      b.y -= dy * pull;
    }
    // gravity toward the zone anchor keeps clusters together
    for (const node of ordered) {
      const p = positions[node];
      const anchor = anchors[zoneOf[node] ?? ''];
      p.x += (anchor.x - p.x) * 0.08 * cooling;
      p.y += (anchor.y - p.y) * 0.08 * cooling;
    }
  }

  for (const node of ordered) {
    const p = positions[node];
    p.x = Math.min(Math.max(p.x, NODE_PADDING), WIDTH - NODE_PADDING);
    p.y = Math.min(Math.max(p.y, NODE_PADDING), HEIGHT - NODE_PADDING);
  }

  const zoneBoxes: ZoneBox[] = zoneIds.map((zoneId) => {
    const members = ordered.filter((n) => (zoneOf[n] ?? '') === zoneId);
    const xs = members.map((n) => positions[n].x);
    const ys = members.map((n) => positions[n].y);
    const minX = Math.min(...xs) - NODE_PADDING;
    const maxX = Math.max(...xs) + NODE_PADDING;
    const minY = Math.min(...ys) - NODE_PADDING;
    const maxY = Math.max(...ys) + NODE_PADDING;
    return { zoneId, x: minX, y: minY, width: maxX - minX, height: maxY - minY };
  });

  return { positions, zoneBoxes, width: WIDTH, height: HEIGHT };
}
