/** Captured API payloads: byte-for-byte what the backend serves for the
 * shipped fixtures. Regenerate by re-running the backend exporters. */

import type { AttackGraphDoc, ScenarioDiffDoc, TopologyDoc } from '../src/types.js';

export const FIG2_TOPOLOGY: TopologyDoc = {
  "buses": [],
  "components": [
    {
      "id": "S7-1200",
      "kind": "PLC",
      "name": "S7-1200",
      "zone": "remote-station-2"
    },
    {
      "id": "S7-1512",
      "kind": "PLC",
      "name": "S7-1512",
      "zone": "remote-station-3"
    },
    {
      "id": "SCALANCE M816-1",
      "kind": "ROUTER_GATEWAY",
      "name": "SCALANCE M816-1",
      "zone": "central-plant"
    },
    {
      "id": "SCALANCE M826-2",
      "kind": "ROUTER_GATEWAY",
      "name": "SCALANCE M826-2",
      "zone": "central-plant"
    },
    {
      "id": "SCALANCE XF204-2BA",
      "kind": "SWITCH",
      "name": "SCALANCE XF204-2BA",
      "zone": "central-plant"
    },
    {
      "id": "TIM 1531 IRC",
      "kind": "MODULE",
      "name": "TIM 1531 IRC",
      "zone": "remote-station-4"
    }
  ],
  "edges": [
    [
      "S7-1200",
      "SCALANCE M826-2"
    ],
    [
      "SCALANCE M816-1",
      "TIM 1531 IRC"
    ],
    [
      "SCALANCE M826-2",
      "S7-1200"
    ],
    [
      "SCALANCE M826-2",
      "S7-1512"
    ],
    [
      "SCALANCE M826-2",
      "SCALANCE M816-1"
    ],
    [
      "SCALANCE M826-2",
      "SCALANCE XF204-2BA"
    ]
  ],
  "zones": [
    {
      "id": "central-plant",
      "name": "Central Plant"
    },
    {
      "id": "remote-station-2",
      "name": "Remote Station 2"
    },
    {
      "id": "remote-station-3",
      "name": "Remote Station 3"
    },
    {
      "id": "remote-station-4",
      "name": "Remote Station 4"
    }
  ]
};

export const FIG2_ATTACK: AttackGraphDoc = {
  "best_state": {
    "S7-1200": "OS(ADMIN)",
    "S7-1512": "OS(ADMIN)",
    "SCALANCE M816-1": "OS(ADMIN)",
    "SCALANCE M826-2": "OS(ADMIN)",
    "SCALANCE XF204-2BA": "OS(ADMIN)",
    "TIM 1531 IRC": "OS(ADMIN)"
  },
  "edges": [
    {
      "consequence": "OS(ADMIN)",
      "cve_id": "CVE-2017-14491",
      "from": "S7-1200",
      "kind": "LATERAL",
      "to": "SCALANCE M826-2"
    },
    {
      "consequence": "OS(ADMIN)",
      "cve_id": "CVE-2016-4658",
      "from": "S7-1512",
      "kind": "LOCAL",
      "to": "S7-1512"
    },
    {
      "consequence": "OS(ADMIN)",
      "cve_id": "CVE-2015-8011",
      "from": "SCALANCE M816-1",
      "kind": "LATERAL",
      "to": "TIM 1531 IRC"
    },
    {
      "consequence": "OS(USER)",
      "cve_id": "CVE-2019-1010023",
      "from": "SCALANCE M826-2",
      "kind": "LATERAL",
      "to": "S7-1512"
    },
    {
      "consequence": "OS(ADMIN)",
      "cve_id": "CVE-2017-14491",
      "from": "SCALANCE M826-2",
      "kind": "LATERAL",
      "to": "SCALANCE M816-1"
    },
    {
      "consequence": "OS(ADMIN)",
      "cve_id": "CVE-2020-25226",
      "from": "SCALANCE M826-2",
      "kind": "LATERAL",
      "to": "SCALANCE XF204-2BA"
    }
  ],
  "initial_privilege": "OS(ADMIN)",
  "nodes": [
    "S7-1200",
    "S7-1512",
    "SCALANCE M816-1",
    "SCALANCE M826-2",
    "SCALANCE XF204-2BA",
    "TIM 1531 IRC"
  ],
  "start": "S7-1200",
  "zones": {
    "S7-1200": "remote-station-2",
    "S7-1512": "remote-station-3",
    "SCALANCE M816-1": "central-plant",
    "SCALANCE M826-2": "central-plant",
    "SCALANCE XF204-2BA": "central-plant",
    "TIM 1531 IRC": "remote-station-4"
  }
};

export const PATCH_FRONT_FIREWALL_DIFF: ScenarioDiffDoc = {
  "edges_added": [],
  "edges_removed": [
    {
      "consequence": "OS(ADMIN)",
      "cve_id": "CVE-2021-40365",
      "from": "Enterprise Workstation",
      "kind": "LATERAL",
      "to": "Front Firewall"
    }
  ],
  "newly_reachable_zones": [],
  "scenario": "patch-front-firewall",
  "targets_delta": {
    "Back Firewall": {
      "p_after": 0.0,
      "p_before": 0.0
    },
    "Enterprise Workstation": {
      "p_after": 0.0,
      "p_before": 0.0
    },
    "Front Firewall": {
      "p_after": 0.0,
      "p_before": 0.268494234477
    },
    "PCS 7 Web Server": {
      "p_after": 0.0,
      "p_before": 0.0
    },
    "S7-1510": {
      "p_after": 0.00329,
      "p_before": 0.00329
    },
    "S7-1512-1": {
      "p_after": 0.010973937007,
      "p_before": 0.010973937007
    },
    "S7-1512-2": {
      "p_after": 0.010973937007,
      "p_before": 0.010973937007
    },
    "SCALANCE M826-2": {
      "p_after": 0.99778671058,
      "p_before": 0.99778671058
    },
    "SCALANCE XF204-2BA": {
      "p_after": 0.0,
      "p_before": 0.0
    }
  }
};

export const CASE_STUDY_BASE_ATTACK: AttackGraphDoc = {
  "best_state": {
    "Enterprise Workstation": "OS(ADMIN)",
    "Front Firewall": "OS(ADMIN)"
  },
  "edges": [
    {
      "consequence": "OS(ADMIN)",
      "cve_id": "CVE-2021-40365",
      "from": "Enterprise Workstation",
      "kind": "LATERAL",
      "to": "Front Firewall"
    }
  ],
  "initial_privilege": "OS(ADMIN)",
  "nodes": [
    "Enterprise Workstation",
    "Front Firewall"
  ],
  "start": "Enterprise Workstation",
  "zones": {
    "Enterprise Workstation": "enterprise",
    "Front Firewall": "dmz"
  }
};
