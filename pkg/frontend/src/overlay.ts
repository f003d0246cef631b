/** Scenario overlay drafts: built by workbench gestures, validated against
 * the same schema the server enforces, serialized losslessly. */

import {
  CONSEQUENCE_LEVELS,
  PRIVILEGE_LEVELS,
  type OverlayAction,
  type OverlayDoc,
  type PrivilegeLevel,
} from './types.js';

const XVE_PATTERN = /^XVE-[A-Z0-9][A-Z0-9-]*$/;

export interface ValidationIssue {
  action: number | null;
  field: string;
  message: string;
}

export class OverlayDraft {
  name: string;
  private actions: OverlayAction[] = [];

  constructor(name = 'workbench-draft') {
    this.name = name;
  }

  get size(): number {
    return this.actions.length;
  }

  list(): OverlayAction[] {
    return [...this.actions];
  }

  /** Checkbox on a device panel: toggle a patch on/off. */
  togglePatch(cveId: string, scope = 'ALL'): void {
    const index = this.actions.findIndex((a) => a.op === 'patch_cve' && a.cve_id === cveId && a.scope === scope);
    if (index >= 0) this.actions.splice(index, 1);
    else this.actions.push({ op: 'patch_cve', cve_id: cveId, scope });
  }

  hasPatch(cveId: string, scope = 'ALL'): boolean {
    return this.actions.some((a) => a.op === 'patch_cve' && a.cve_id === cveId && a.scope === scope);
  }

  addArtificialVuln(
    component: string,
    cveId: string,
    description: string,
    precondition: PrivilegeLevel,
    consequence: PrivilegeLevel,
  ): void {
    this.actions.push({
      op: 'add_vuln',
      component,
      cve_id: cveId,
      cvss_vector: null,
      description,
      precondition,
      consequence,
    });
  }

  /** Click on a link: toggle between blocked and untouched. */
  toggleBlockLink(from: string, to: string): void {
    const index = this.actions.findIndex(
      (a) =>
        a.op === 'block_link' &&
        ((a.from === from && a.to === to) || (a.from === to && a.to === from)),
    );
    if (index >= 0) this.actions.splice(index, 1);
    else this.actions.push({ op: 'block_link', from, to });
  }

  setStart(node: string, privilege: PrivilegeLevel): void {
    this.actions = this.actions.filter((a) => a.op !== 'set_start');
    this.actions.push({ op: 'set_start', node, privilege });
  }

  removeAction(index: number): void {
    this.actions.splice(index, 1);
  }

  clear(): void {
    this.actions = [];
  }

  toDoc(): OverlayDoc {
    return { name: this.name, actions: this.list() };
  }

  static fromDoc(doc: OverlayDoc): OverlayDraft {
    const issues = validateOverlay(doc);
    if (issues.length) throw new Error(issues.map((i) => i.message).join('; '));
    const draft = new OverlayDraft(doc.name);
    draft.actions = doc.actions.map((a) => ({ ...a }));
    return draft;
  }
}

export function validateOverlay(doc: OverlayDoc): ValidationIssue[] {
  const issues: ValidationIssue[] = [];
  if (!doc.name || typeof doc.name !== 'string') {
    issues.push({ action: null, field: 'name', message: 'scenario name is required' });
  }
  doc.actions.forEach((action, i) => {
    switch (action.op) {
      case 'add_vuln':
        if (!action.component) issues.push({ action: i, field: 'component', message: `action ${i}: component is required` });
        if (!XVE_PATTERN.test(action.cve_id))
          issues.push({ action: i, field: 'cve_id', message: `action ${i}: artificial ids must look like XVE-NAME` });
        if (!PRIVILEGE_LEVELS.includes(action.precondition))
          issues.push({ action: i, field: 'precondition', message: `action ${i}: bad precondition` });
        if (!CONSEQUENCE_LEVELS.includes(action.consequence))
          issues.push({ action: i, field: 'consequence', message: `action ${i}: consequence must be NONE, OS(USER) or OS(ADMIN)` });
        break;
      case 'patch_cve':
        if (!action.cve_id) issues.push({ action: i, field: 'cve_id', message: `action ${i}: cve_id is required` });
        if (!action.scope) issues.push({ action: i, field: 'scope', message: `action ${i}: scope is required` });
        break;
      case 'block_link':
      case 'unblock_link':
        if (!action.from || !action.to)
          issues.push({ action: i, field: 'from', message: `action ${i}: link endpoints are required` });
        if (action.from === action.to)
          issues.push({ action: i, field: 'to', message: `action ${i}: a link needs two distinct endpoints` });
        break;
      case 'set_start':
        if (!action.node) issues.push({ action: i, field: 'node', message: `action ${i}: node is required` });
        if (!PRIVILEGE_LEVELS.includes(action.privilege))
          issues.push({ action: i, field: 'privilege', message: `action ${i}: bad privilege` });
        break;
      default:
        issues.push({ action: i, field: 'op', message: `action ${i}: unknown op` });
    }
  });
  return issues;
}

export function serializeOverlay(doc: OverlayDoc): string {
  return JSON.stringify(doc, null, 2);
}

export function parseOverlay(text: string): OverlayDoc {
  const doc = JSON.parse(text) as OverlayDoc;
  const issues = validateOverlay(doc);
  if (issues.length) throw new Error(issues.map((i) => i.message).join('; '));
  return doc;
}
