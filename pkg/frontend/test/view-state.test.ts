import { describe, expect, it } from 'vitest';

import { decodeViewState, DEFAULT_PRIVILEGE, encodeViewState, type ViewState } from '../src/view-state.js';

describe('deep links', () => {
  it('round-trips a full view state', () => {
    const state: ViewState = {
      workspaceId: 'abc123',
      start: 'PCS 7 Web Server',
      privilege: 'OS(USER)',
      scenarioId: 'sid42',
    };
    expect(decodeViewState(encodeViewState(state))).toEqual(state);
  });

  it('omits defaults and restores them on decode', () => {
    const state: ViewState = { workspaceId: 'w', start: 's', privilege: DEFAULT_PRIVILEGE, scenarioId: null };
    const encoded = encodeViewState(state);
    expect(encoded).not.toContain('priv');
    expect(decodeViewState(encoded)).toEqual(state);
  });

  it('falls back to the default privilege on garbage', () => {
    expect(decodeViewState('ws=w&priv=ROOT').privilege).toBe(DEFAULT_PRIVILEGE);
  });

  it('handles the empty query', () => {
    expect(decodeViewState('')).toEqual({
      workspaceId: null,
      start: null,
      privilege: DEFAULT_PRIVILEGE,
      scenarioId: null,
    });
  });
});
