/** Deep-linkable view state: everything needed to reproduce a view lives in
 * the URL; artifacts themselves come from the server. */

import type { PrivilegeLevel } from './types.js';
import { PRIVILEGE_LEVELS } from './types.js';

export interface ViewState {
  workspaceId: string | null;
  start: string | null;
  privilege: PrivilegeLevel;
  scenarioId: string | null;
}

export const DEFAULT_PRIVILEGE: PrivilegeLevel = 'OS(ADMIN)';

export function encodeViewState(state: ViewState): string {
  const params = new URLSearchParams();
  if (state.workspaceId) params.set('ws', state.workspaceId);
  if (state.start) params.set('start', state.start);
  if (state.privilege !== DEFAULT_PRIVILEGE) params.set('priv', state.privilege);
  if (state.scenarioId) params.set('scenario', state.scenarioId);
  return params.toString();
}

export function decodeViewState(query: string): ViewState {
  const params = new URLSearchParams(query);
  const priv = params.get('priv');
  return {
    workspaceId: params.get('ws'),
    start: params.get('start'),
    privilege: priv && (PRIVILEGE_LEVELS as string[]).includes(priv) ? (priv as PrivilegeLevel) : DEFAULT_PRIVILEGE,
    scenarioId: params.get('scenario'),
  };
}
