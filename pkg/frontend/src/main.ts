/** Bootstrap: restore view state from the URL, fetch artifacts, wire the
 * workbench controls. */

import { ApiClient } from './api.js';
import { renderErrorPanel } from './render.js';
import { Workbench, type WorkbenchElements } from './workbench.js';
import { CONSEQUENCE_LEVELS, PRIVILEGE_LEVELS, type PrivilegeLevel } from './types.js';
import { decodeViewState, encodeViewState } from './view-state.js';

function byId(id: string): HTMLElement {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el;
}

async function bootstrap(): Promise<void> {
  const api = new ApiClient();
  const view = decodeViewState(window.location.search);
  const elements: WorkbenchElements = {
    graph: byId('graph'),
    detail: byId('detail'),
    deltaTable: byId('delta-table'),
    zoneSummary: byId('zone-summary'),
    draftList: byId('draft-list'),
    status: byId('status'),
  };

  if (!view.workspaceId) {
    renderErrorPanel(
      byId('graph'),
      'no workspace selected',
      'open the UI with ?ws=<workspace-id>&start=<device-id> after uploading artifacts via the API',
    );
    return;
  }

  try {
    const [topology, enriched] = await Promise.all([
      api.getGraph(view.workspaceId),
      api.getEnriched(view.workspaceId),
    ]);

    const startSelect = byId('start-select') as HTMLSelectElement;
    for (const component of topology.components) {
      const option = document.createElement('option');
      option.value = component.id;
      option.textContent = component.id;
      startSelect.appendChild(option);
    }
    if (!view.start) view.start = topology.components[0]?.id ?? null;
    if (view.start) startSelect.value = view.start;

    const privilegeSelect = byId('privilege-select') as HTMLSelectElement;
    for (const level of PRIVILEGE_LEVELS) {
      const option = document.createElement('option');
      option.value = level;
      option.textContent = level;
      privilegeSelect.appendChild(option);
    }
    privilegeSelect.value = view.privilege;

    const workbench = new Workbench(api, view, topology, enriched, elements);
    await workbench.showBaseline();

    startSelect.addEventListener('change', () => {
      view.start = startSelect.value;
      window.history.replaceState(null, '', `?${encodeViewState(view)}`);
      void workbench.showBaseline();
    });
    privilegeSelect.addEventListener('change', () => {
      view.privilege = privilegeSelect.value as PrivilegeLevel;
      window.history.replaceState(null, '', `?${encodeViewState(view)}`);
      void workbench.showBaseline();
    });

    const componentSelect = byId('vuln-component') as HTMLSelectElement;
    for (const component of topology.components) {
      const option = document.createElement('option');
      option.value = component.id;
      option.textContent = component.id;
      componentSelect.appendChild(option);
    }
    const consequenceSelect = byId('vuln-consequence') as HTMLSelectElement;
    for (const level of CONSEQUENCE_LEVELS) {
      const option = document.createElement('option');
      option.value = level;
      option.textContent = level;
      consequenceSelect.appendChild(option);
    }
    const preconditionSelect = byId('vuln-precondition') as HTMLSelectElement;
    for (const level of PRIVILEGE_LEVELS) {
      const option = document.createElement('option');
      option.value = level;
      option.textContent = level;
      preconditionSelect.appendChild(option);
    }

    byId('add-vuln').addEventListener('click', () => {
      const idInput = byId('vuln-id') as HTMLInputElement;
      const descInput = byId('vuln-desc') as HTMLInputElement;
      workbench.addArtificialVuln(
        componentSelect.value,
        idInput.value.trim(),
        descInput.value.trim(),
        preconditionSelect.value as PrivilegeLevel,
        consequenceSelect.value as PrivilegeLevel,
      );
    });
    byId('run').addEventListener('click', () => void workbench.run());
    byId('undo').addEventListener('click', () => workbench.undo());
    byId('clear-draft').addEventListener('click', () => {
      workbench.draft.clear();
      workbench.renderDraft();
    });
  } catch (error) {
    renderErrorPanel(byId('graph'), 'failed to load workspace artifacts', String(error));
  }
}

void bootstrap();
