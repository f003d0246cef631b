/** Delta-table rows from a scenario diff payload.
 *
 * Numbers are formatted from the payload values and nothing else; the color
 * class flips only on material changes (|delta| >= 0.01).
 */

import type { AttackGraphDoc, ScenarioDiffDoc } from './types.js';

export const MATERIAL_DELTA = 0.01;

export interface DeltaRow {
  target: string;
  before: string; // 6-decimal rendering of the payload number
  after: string;
  delta: number;
  direction: 'up' | 'down' | 'flat';
  /** target sits in the base attack graph from the selected start */
  downstream: boolean;
}

export function formatProbability(value: number): string {
  return value.toFixed(6);
}

export function buildDeltaRows(diff: ScenarioDiffDoc, baseGraph: AttackGraphDoc): DeltaRow[] {
  const downstream = new Set(baseGraph.nodes.filter((n) => n !== baseGraph.start));
  return Object.keys(diff.targets_delta)
    .sort()
    .map((target) => {
      const { p_before, p_after } = diff.targets_delta[target];
      const delta = p_after - p_before;
      let direction: DeltaRow['direction'] = 'flat';
      if (delta >= MATERIAL_DELTA) direction = 'up';
      else if (delta <= -MATERIAL_DELTA) direction = 'down';
      return {
        target,
        before: formatProbability(p_before),
        after: formatProbability(p_after),
        delta,
        direction,
        downstream: downstream.has(target),
      };
    });
}

export interface ZoneFlip {
  zoneId: string;
  reachable: boolean;
}

/** Zone summary rows: which zones the variant newly reaches. */
export function buildZoneSummary(diff: ScenarioDiffDoc, allZones: string[]): ZoneFlip[] {
  const newly = new Set(diff.newly_reachable_zones);
  return [...allZones].sort().map((zoneId) => ({ zoneId, reachable: newly.has(zoneId) }));
}
