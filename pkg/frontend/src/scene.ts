/** Pure scene construction from API payloads.
 *
 * The scene is everything the renderer draws: zone clusters, node boxes,
 * labeled exploit edges, dashed self-loops. Building it never computes
 * attack semantics; every label is copied from the payloads.
 */

import { computeLayout, type Layout } from './layout.js';
import type { AttackGraphDoc, TopologyDoc } from './types.js';

export interface SceneNode {
  id: string;
  zoneId: string;
  isStart: boolean;
  bestPrivilege: string | null;
}

export interface SceneEdge {
  from: string;
  to: string;
  cveId: string;
  label: string;
  dashed: boolean;
  selfLoop: boolean;
}

export interface SceneCluster {
  zoneId: string;
  zoneName: string;
  nodeIds: string[];
}

export interface GraphScene {
  clusters: SceneCluster[];
  nodes: SceneNode[];
  edges: SceneEdge[];
  layout: Layout;
  emptyBanner: string | null;
}

export class PayloadError extends Error {}

function zoneNames(topology: TopologyDoc): Record<string, string> {
  const names: Record<string, string> = {};
  for (const zone of topology.zones) names[zone.id] = zone.name;
  return names;
}

export function buildScene(attack: AttackGraphDoc, topology: TopologyDoc): GraphScene {
  if (!Array.isArray(attack.nodes) || !Array.isArray(attack.edges)) {
    throw new PayloadError('attack graph payload is missing nodes or edges');
  }
  if (!Array.isArray(topology.zones)) {
    throw new PayloadError('topology payload is missing zones');
  }
  const names = zoneNames(topology);
  const zoneOf = attack.zones ?? {};
  for (const node of attack.nodes) {
    if (!(node in zoneOf)) throw new PayloadError(`attack graph node ${node} has no zone`);
  }

  const byZone = new Map<string, string[]>();
  for (const node of [...attack.nodes].sort()) {
    const zone = zoneOf[node];
    if (!byZone.has(zone)) byZone.set(zone, []);
    byZone.get(zone)!.push(node);
  }
  const clusters: SceneCluster[] = [...byZone.keys()].sort().map((zoneId) => ({
    zoneId,
    zoneName: names[zoneId] ?? zoneId,
    nodeIds: byZone.get(zoneId)!,
  }));

  const nodes: SceneNode[] = [...attack.nodes].sort().map((id) => ({
    id,
    zoneId: zoneOf[id],
    isStart: id === attack.start,
    bestPrivilege: attack.best_state?.[id] ?? null,
  }));

  const edges: SceneEdge[] = attack.edges.map((edge) => ({
    from: edge.from,
    to: edge.to,
    cveId: edge.cve_id,
    label: `${edge.cve_id} ⇒ ${edge.consequence}`,
    dashed: edge.kind === 'LOCAL',
    selfLoop: edge.from === edge.to,
  }));

  const layout = computeLayout(
    attack.nodes,
    edges.map((e) => [e.from, e.to] as [string, string]),
    zoneOf,
    JSON.stringify({ nodes: attack.nodes, edges: attack.edges.map((e) => [e.from, e.to, e.cve_id]) }),
  );

  return {
    clusters,
    nodes,
    edges,
    layout,
    emptyBanner: edges.length === 0 ? 'no feasible paths from this start' : null,
  };
}
