/** Wire types mirroring the /api/v1 JSON payloads. */

export type PrivilegeLevel = 'NONE' | 'APP(USER)' | 'APP(ADMIN)' | 'OS(USER)' | 'OS(ADMIN)';

export interface TopologyDoc {
  zones: { id: string; name: string }[];
  components: { id: string; name: string; kind: string; zone: string }[];
  buses: { id: string; zone: string }[];
  edges: [string, string][];
}

export interface ExploitEdgeDoc {
  from: string;
  to: string;
  cve_id: string;
  consequence: PrivilegeLevel;
  kind: 'LATERAL' | 'LOCAL';
}

export interface AttackGraphDoc {
  start: string;
  initial_privilege: PrivilegeLevel;
  nodes: string[];
  edges: ExploitEdgeDoc[];
  best_state: Record<string, PrivilegeLevel>;
  zones: Record<string, string>;
}

export interface ClassifiedVulnDoc {
  cve_id: string;
  cvss_vector: string | null;
  description: string;
  source_advisory: string;
  artificial: boolean;
  precondition: PrivilegeLevel;
  consequence: PrivilegeLevel;
  rule_id: string;
}

export interface EnrichedDoc {
  topology: TopologyDoc;
  vulns: Record<string, ClassifiedVulnDoc[]>;
}

export interface TargetReportDoc {
  target: string;
  p_target: number;
  paths: number;
  mean_len: number | null;
  median_len: number | null;
  max_len: number | null;
}

export interface LikelihoodDoc {
  snapshot_date: string | null;
  partial: boolean;
  reports: TargetReportDoc[];
}

export interface ScenarioDiffDoc {
  scenario: string;
  edges_added: ExploitEdgeDoc[];
  edges_removed: ExploitEdgeDoc[];
  targets_delta: Record<string, { p_before: number; p_after: number }>;
  newly_reachable_zones: string[];
}

export type OverlayAction =
  | {
      op: 'add_vuln';
      component: string;
      cve_id: string;
      cvss_vector: string | null;
      description: string;
      precondition: PrivilegeLevel;
      consequence: PrivilegeLevel;
    }
  | { op: 'patch_cve'; cve_id: string; scope: string }
  | { op: 'block_link'; from: string; to: string }
  | { op: 'unblock_link'; from: string; to: string }
  | { op: 'set_start'; node: string; privilege: PrivilegeLevel };

export interface OverlayDoc {
  name: string;
  actions: OverlayAction[];
}

export const PRIVILEGE_LEVELS: PrivilegeLevel[] = ['NONE', 'APP(USER)', 'APP(ADMIN)', 'OS(USER)', 'OS(ADMIN)'];

export const CONSEQUENCE_LEVELS: PrivilegeLevel[] = ['NONE', 'OS(USER)', 'OS(ADMIN)'];
