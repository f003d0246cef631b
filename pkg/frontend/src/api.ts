/** Typed client for the /api/v1 endpoints.
 *
 * At most one analysis request is in flight per client; starting a new run
 * aborts the previous one so stale results never land on screen.
 */

import type { AttackGraphDoc, EnrichedDoc, LikelihoodDoc, OverlayDoc, ScenarioDiffDoc, TopologyDoc } from './types.js';

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

type FetchLike = typeof fetch;

export class ApiClient {
  private inflight: AbortController | null = null;

  constructor(
    private base: string = '/api/v1',
    private fetchImpl: FetchLike = (...args) => fetch(...args),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(`${this.base}${path}`, init);
    const text = await response.text();
    if (!response.ok) {
      let detail = text;
      try {
        detail = JSON.parse(text).error ?? text;
      } catch {
        /* plain-text error body */
      }
      throw new ApiError(response.status, detail);
    }
    return JSON.parse(text) as T;
  }

  createWorkspace(): Promise<{ id: string }> {
    return this.request('/workspaces', { method: 'POST' });
  }

  uploadArtifact(workspace: string, kind: 'topology' | 'advisories' | 'aliases' | 'epss', body: string): Promise<unknown> {
    return this.request(`/workspaces/${workspace}/${kind}`, { method: 'POST', body });
  }

  getGraph(workspace: string): Promise<TopologyDoc> {
    return this.request(`/workspaces/${workspace}/graph`);
  }

  getEnriched(workspace: string): Promise<EnrichedDoc> {
    return this.request(`/workspaces/${workspace}/enriched`);
  }

  getAttackGraph(workspace: string, start: string, privilege: string, scenario?: string): Promise<AttackGraphDoc> {
    const params = new URLSearchParams({ start, privilege });
    if (scenario) params.set('scenario', scenario);
    return this.request(`/workspaces/${workspace}/attack-graph?${params}`);
  }

  getLikelihood(workspace: string, maxLen = 8): Promise<LikelihoodDoc> {
    return this.request(`/workspaces/${workspace}/likelihood?max_len=${maxLen}`);
  }

  postScenario(workspace: string, overlay: OverlayDoc): Promise<{ id: string }> {
    return this.request(`/workspaces/${workspace}/scenarios`, {
      method: 'POST',
      body: JSON.stringify(overlay),
    });
  }

  /** Scenario analysis run; cancels any run already in flight. */
  async runScenarioDiff(
    workspace: string,
    scenarioId: string,
    start: string,
    privilege: string,
  ): Promise<ScenarioDiffDoc> {
    this.cancelRunning();
    const controller = new AbortController();
    this.inflight = controller;
    const params = new URLSearchParams({ start, privilege });
    try {
      return await this.request<ScenarioDiffDoc>(
        `/workspaces/${workspace}/scenarios/${scenarioId}/diff?${params}`,
        { signal: controller.signal },
      );
    } finally {
      if (this.inflight === controller) this.inflight = null;
    }
  }

  cancelRunning(): void {
    if (this.inflight) {
      this.inflight.abort();
      this.inflight = null;
    }
  }
}
