/** Scenario workbench: gestures build an overlay draft, Run posts it and
 * re-renders the attack graph next to a before/after probability table. */

import { ApiClient, ApiError } from './api.js';
import { buildDeltaRows, buildZoneSummary, type DeltaRow } from './deltas.js';
import { SessionHistory } from './history.js';
import { OverlayDraft, validateOverlay } from './overlay.js';
import { buildScene, PayloadError } from './scene.js';
import { renderErrorPanel, renderScene, renderVulnList, renderEdgeDetail } from './render.js';
import type { AttackGraphDoc, EnrichedDoc, PrivilegeLevel, ScenarioDiffDoc, TopologyDoc } from './types.js';
import { encodeViewState, type ViewState } from './view-state.js';

interface RunSnapshot {
  scenarioId: string;
  attack: AttackGraphDoc;
  diff: ScenarioDiffDoc;
}

export interface WorkbenchElements {
  graph: HTMLElement;
  detail: HTMLElement;
  deltaTable: HTMLElement;
  zoneSummary: HTMLElement;
  draftList: HTMLElement;
  status: HTMLElement;
}

export class Workbench {
  readonly draft = new OverlayDraft();
  private history = new SessionHistory<RunSnapshot>();
  private baseAttack: AttackGraphDoc | null = null;

  constructor(
    private api: ApiClient,
    private view: ViewState,
    private topology: TopologyDoc,
    private enriched: EnrichedDoc,
    private el: WorkbenchElements,
  ) {}

  async showBaseline(): Promise<void> {
    if (!this.view.workspaceId || !this.view.start) return;
    try {
      this.baseAttack = await this.api.getAttackGraph(this.view.workspaceId, this.view.start, this.view.privilege);
      renderScene(this.el.graph, buildScene(this.baseAttack, this.topology), this.callbacks());
      this.el.status.textContent = `baseline from ${this.view.start} (${this.view.privilege})`;
    } catch (error) {
      this.showError('could not render baseline', error);
    }
  }

  private callbacks() {
    return {
      onNodeClick: (nodeId: string) =>
        renderVulnList(
          this.el.detail,
          nodeId,
          this.enriched.vulns[nodeId] ?? [],
          (cveId, checked) => {
            if (checked !== this.draft.hasPatch(cveId)) this.draft.togglePatch(cveId);
            this.renderDraft();
          },
          (cveId) => this.draft.hasPatch(cveId),
        ),
      onEdgeClick: (edge: Parameters<typeof renderEdgeDetail>[1]) =>
        renderEdgeDetail(this.el.detail, edge, this.enriched),
    };
  }

  addArtificialVuln(component: string, cveId: string, description: string, pre: PrivilegeLevel, cons: PrivilegeLevel): void {
    this.draft.addArtificialVuln(component, cveId, description, pre, cons);
    this.renderDraft();
  }

  blockLink(from: string, to: string): void {
    this.draft.toggleBlockLink(from, to);
    this.renderDraft();
  }

  moveStart(node: string, privilege: PrivilegeLevel): void {
    this.draft.setStart(node, privilege);
    this.renderDraft();
  }

  renderDraft(): void {
    this.el.draftList.replaceChildren();
    const list = document.createElement('ol');
    this.draft.list().forEach((action, index) => {
      const item = document.createElement('li');
      item.textContent = JSON.stringify(action);
      const remove = document.createElement('button');
      remove.textContent = 'x';
      remove.addEventListener('click', () => {
        this.draft.removeAction(index);
        this.renderDraft();
      });
      item.appendChild(remove);
      list.appendChild(item);
    });
    this.el.draftList.appendChild(list);
  }

  /** Post the draft, run the diff, and re-render graph plus delta table. */
  async run(): Promise<void> {
    if (!this.view.workspaceId || !this.view.start) return;
    const doc = this.draft.toDoc();
    const issues = validateOverlay(doc);
    if (issues.length) {
      this.showError('overlay draft is invalid', new Error(issues.map((i) => i.message).join('\n')));
      return;
    }
    try {
      this.el.status.textContent = 'running…';
      const { id } = await this.api.postScenario(this.view.workspaceId, doc);
      const diff = await this.api.runScenarioDiff(this.view.workspaceId, id, this.view.start, this.view.privilege);
      const attack = await this.api.getAttackGraph(this.view.workspaceId, this.view.start, this.view.privilege, id);
      this.history.push(doc.name, { scenarioId: id, attack, diff });
      this.view.scenarioId = id;
      window.history.replaceState(null, '', `?${encodeViewState(this.view)}`);
      this.renderRun({ scenarioId: id, attack, diff });
    } catch (error) {
      if ((error as Error).name === 'AbortError') return; // superseded by a newer run
      this.showError('scenario run failed', error);
    }
  }

  /** Step back through the session history. */
  undo(): void {
    const previous = this.history.stepBack();
    if (previous) {
      this.view.scenarioId = previous.snapshot.scenarioId;
      this.renderRun(previous.snapshot);
    } else {
      this.view.scenarioId = null;
      void this.showBaseline();
      this.el.deltaTable.replaceChildren();
      this.el.zoneSummary.replaceChildren();
    }
    window.history.replaceState(null, '', `?${encodeViewState(this.view)}`);
  }

  private renderRun(snapshot: RunSnapshot): void {
    try {
      renderScene(this.el.graph, buildScene(snapshot.attack, this.topology), this.callbacks());
    } catch (error) {
      if (error instanceof PayloadError) {
        this.showError('malformed attack-graph payload', error);
        return;
      }
      throw error;
    }
    if (!this.baseAttack) return;
    const rows = buildDeltaRows(snapshot.diff, this.baseAttack);
    this.renderDeltaTable(rows);
    this.renderZones(snapshot.diff);
    this.el.status.textContent = `scenario ${snapshot.diff.scenario} (${this.history.length} run${this.history.length === 1 ? '' : 's'} this session)`;
  }

  private renderDeltaTable(rows: DeltaRow[]): void {
    this.el.deltaTable.replaceChildren();
    const table = document.createElement('table');
    table.className = 'delta-table';
    const head = document.createElement('tr');
    for (const title of ['target', 'p before', 'p after', '']) {
      const th = document.createElement('th');
      th.textContent = title;
      head.appendChild(th);
    }
    table.appendChild(head);
    for (const row of rows) {
      const tr = document.createElement('tr');
      tr.className = `delta-${row.direction}${row.downstream ? ' downstream' : ''}`;
      for (const cell of [row.target, row.before, row.after]) {
        const td = document.createElement('td');
        td.textContent = cell;
        tr.appendChild(td);
      }
      const marker = document.createElement('td');
      marker.textContent = row.direction === 'up' ? '▲' : row.direction === 'down' ? '▼' : '';
      tr.appendChild(marker);
      table.appendChild(tr);
    }
    this.el.deltaTable.appendChild(table);
  }

  private renderZones(diff: ScenarioDiffDoc): void {
    this.el.zoneSummary.replaceChildren();
    const flips = buildZoneSummary(diff, this.topology.zones.map((z) => z.id));
    const list = document.createElement('ul');
    list.className = 'zone-summary';
    for (const flip of flips) {
      const item = document.createElement('li');
      item.className = flip.reachable ? 'newly-reachable' : '';
      item.textContent = flip.reachable ? `${flip.zoneId}: newly reachable` : flip.zoneId;
      list.appendChild(item);
    }
    this.el.zoneSummary.appendChild(list);
  }

  private showError(title: string, error: unknown): void {
    const detail = error instanceof ApiError ? `${error.status}: ${error.message}` : String(error);
    renderErrorPanel(this.el.detail, title, detail);
    this.el.status.textContent = title;
  }
}
