import { describe, expect, it } from 'vitest';

import { OverlayDraft, parseOverlay, serializeOverlay, validateOverlay } from '../src/overlay.js';
import type { OverlayDoc } from '../src/types.js';

describe('overlay drafts', () => {
  it('patch checkbox toggles on and off', () => {
    const draft = new OverlayDraft();
    draft.togglePatch('CVE-2021-40365');
    expect(draft.hasPatch('CVE-2021-40365')).toBe(true);
    expect(draft.toDoc().actions).toEqual([{ op: 'patch_cve', cve_id: 'CVE-2021-40365', scope: 'ALL' }]);
    draft.togglePatch('CVE-2021-40365');
    expect(draft.size).toBe(0);
  });

  it('block-link toggles regardless of click direction', () => {
    const draft = new OverlayDraft();
    draft.toggleBlockLink('a', 'b');
    draft.toggleBlockLink('b', 'a');
    expect(draft.size).toBe(0);
  });

  it('moving the start replaces earlier set_start actions', () => {
    const draft = new OverlayDraft();
    draft.setStart('a', 'OS(ADMIN)');
    draft.setStart('b', 'OS(USER)');
    const actions = draft.toDoc().actions;
    expect(actions).toEqual([{ op: 'set_start', node: 'b', privilege: 'OS(USER)' }]);
  });

  it('round-trips through the server schema unchanged', () => {
    const draft = new OverlayDraft('case');
    draft.addArtificialVuln('Back Firewall', 'XVE-MISCONF-BACKFW', 'forwarding misconfiguration', 'NONE', 'OS(ADMIN)');
    draft.togglePatch('CVE-2021-40365');
    const doc = draft.toDoc();
    const restored = OverlayDraft.fromDoc(parseOverlay(serializeOverlay(doc)));
    expect(restored.toDoc()).toEqual(doc);
  });
});

describe('overlay validation mirrors the API schema', () => {
  it('accepts a well-formed document', () => {
    const doc: OverlayDoc = {
      name: 'ok',
      actions: [
        {
          op: 'add_vuln',
          component: 'Back Firewall',
          cve_id: 'XVE-MISCONF-1',
          cvss_vector: null,
          description: 'x',
          precondition: 'NONE',
          consequence: 'OS(ADMIN)',
        },
      ],
    };
    expect(validateOverlay(doc)).toEqual([]);
  });

  it('rejects non-XVE artificial ids at the offending action', () => {
    const doc: OverlayDoc = {
      name: 'bad',
      actions: [
        {
          op: 'add_vuln',
          component: 'c',
          cve_id: 'CVE-2024-0001',
          cvss_vector: null,
          description: '',
          precondition: 'NONE',
          consequence: 'OS(ADMIN)',
        },
      ],
    };
    const issues = validateOverlay(doc);
    expect(issues).toHaveLength(1);
    expect(issues[0].action).toBe(0);
    expect(issues[0].field).toBe('cve_id');
  });

  it('rejects application-privilege consequences', () => {
    const doc: OverlayDoc = {
      name: 'bad',
      actions: [
        {
          op: 'add_vuln',
          component: 'c',
          cve_id: 'XVE-X-1',
          cvss_vector: null,
          description: '',
          precondition: 'NONE',
          consequence: 'APP(USER)' as never,
        },
      ],
    };
    expect(validateOverlay(doc).map((i) => i.field)).toContain('consequence');
  });

  it('rejects degenerate links', () => {
    const doc: OverlayDoc = { name: 'bad', actions: [{ op: 'block_link', from: 'a', to: 'a' }] };
    expect(validateOverlay(doc)).not.toEqual([]);
  });
});
