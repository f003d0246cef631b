"""What-if overlays: inject artificial vulnerabilities, patch CVEs, edit links.

Overlays are ordered action lists applied as a pure function over an
enriched graph, so the analyst can replay and version them.  A firewall
misconfiguration is modeled as an artificial vulnerability on the firewall
rather than as an ACL rule.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from icsgraph.attack_graph import ExploitEdge, generate
from icsgraph.errors import (
    MalformedInput,
    SchemaViolation,
    UnknownComponent,
    UnknownCve,
    UnknownLink,
)
from icsgraph.likelihood import EpssTable, analyze_all_targets
from icsgraph.model import ClassifiedVuln, PrivilegeLevel, VulnRecord
from icsgraph.topology import TopologyGraph
from icsgraph.vulnerability import EnrichedGraph

ALL = "ALL"
ARTIFICIAL_RULE_ID = "ARTIFICIAL"


@dataclass(frozen=True)
class AddVuln:
    component_id: str
    record: VulnRecord
    precondition: PrivilegeLevel
    consequence: PrivilegeLevel

    def __post_init__(self) -> None:
        if not self.record.artificial:
            raise SchemaViolation(f"{self.record.cve_id}: overlay-injected records must be artificial")


@dataclass(frozen=True)
class PatchCve:
    cve_id: str
    scope: str = ALL  # component id, or ALL


@dataclass(frozen=True)
class BlockLink:
    from_id: str
    to_id: str


@dataclass(frozen=True)
class UnblockLink:
    from_id: str
    to_id: str


@dataclass(frozen=True)
class SetStart:
    node_id: str
    privilege: PrivilegeLevel


Action = AddVuln | PatchCve | BlockLink | UnblockLink | SetStart


@dataclass(frozen=True)
class ScenarioOverlay:
    name: str
    actions: tuple[Action, ...] = field(default=())

    def resolved_start(self, default_node: str, default_privilege: PrivilegeLevel) -> tuple[str, PrivilegeLevel]:
        """Last SetStart action wins; falls back to the given defaults."""
        node, privilege = default_node, default_privilege
        for action in self.actions:
            if isinstance(action, SetStart):
                node, privilege = action.node_id, action.privilege
        return node, privilege


def parse_overlay(text: str) -> ScenarioOverlay:
    """Parse a scenario.json document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"scenario document is not valid JSON: {exc.msg}") from exc
    if not isinstance(doc, dict) or not isinstance(doc.get("name"), str):
        raise SchemaViolation("scenario document must be an object with a 'name'")
    actions: list[Action] = []
    for i, raw in enumerate(doc.get("actions", [])):
        op = raw.get("op")
        try:
            if op == "add_vuln":
                record = VulnRecord(
                    cve_id=raw["cve_id"],
                    cvss_vector=raw.get("cvss_vector"),
                    description=raw.get("description", ""),
                    source_advisory=f"scenario:{doc['name']}",
                    artificial=True,
                )
                actions.append(
                    AddVuln(
                        component_id=raw["component"],
                        record=record,
                        precondition=PrivilegeLevel.parse(raw["precondition"]),
                        consequence=PrivilegeLevel.parse(raw["consequence"]),
                    )
                )
            elif op == "patch_cve":
                actions.append(PatchCve(cve_id=raw["cve_id"], scope=raw.get("scope", ALL)))
            elif op == "block_link":
                actions.append(BlockLink(from_id=raw["from"], to_id=raw["to"]))
            elif op == "unblock_link":
                actions.append(UnblockLink(from_id=raw["from"], to_id=raw["to"]))
            elif op == "set_start":
                actions.append(SetStart(node_id=raw["node"], privilege=PrivilegeLevel.parse(raw["privilege"])))
            else:
                raise SchemaViolation(f"unknown op {op!r}")
        except KeyError as exc:
            raise SchemaViolation(f"action {i}: missing field {exc.args[0]!r}") from exc
    return ScenarioOverlay(name=doc["name"], actions=tuple(actions))


def overlay_to_json(overlay: ScenarioOverlay) -> str:
    actions = []
    for action in overlay.actions:
        if isinstance(action, AddVuln):
            actions.append(
                {
                    "op": "add_vuln",
                    "component": action.component_id,
                    "cve_id": action.record.cve_id,
                    "cvss_vector": action.record.cvss_vector,
                    "description": action.record.description,
                    "precondition": action.precondition.value,
                    "consequence": action.consequence.value,
                }
            )
        elif isinstance(action, PatchCve):
            actions.append({"op": "patch_cve", "cve_id": action.cve_id, "scope": action.scope})
        elif isinstance(action, BlockLink):
            actions.append({"op": "block_link", "from": action.from_id, "to": action.to_id})
        elif isinstance(action, UnblockLink):
            actions.append({"op": "unblock_link", "from": action.from_id, "to": action.to_id})
        else:
            actions.append({"op": "set_start", "node": action.node_id, "privilege": action.privilege.value})
    return json.dumps({"name": overlay.name, "actions": actions}, indent=2, sort_keys=True) + "\n"


def apply(enriched: EnrichedGraph, overlay: ScenarioOverlay) -> EnrichedGraph:
    """Apply actions in order, returning a new graph; the input is untouched."""
    topology = enriched.topology
    vulns = {cid: list(vs) for cid, vs in enriched.vulns}
    edges = set(topology.edges)

    for index, action in enumerate(overlay.actions):
        if isinstance(action, AddVuln):
            if action.component_id not in vulns:
                raise UnknownComponent(f"action {index}: unknown component {action.component_id}")
            attached = vulns[action.component_id]
            if any(v.cve_id == action.record.cve_id for v in attached):
                raise SchemaViolation(f"action {index}: {action.record.cve_id} already attached")
            attached.append(
                ClassifiedVuln(
                    record=action.record,
                    precondition=action.precondition,
                    consequence=action.consequence,
                    rule_id=ARTIFICIAL_RULE_ID,
                )
            )
        elif isinstance(action, PatchCve):
            scope = vulns.keys() if action.scope == ALL else [action.scope]
            if action.scope != ALL and action.scope not in vulns:
                raise UnknownComponent(f"action {index}: unknown component {action.scope}")
            hit = False
            for cid in scope:
                kept = [v for v in vulns[cid] if v.cve_id != action.cve_id]
                hit = hit or len(kept) != len(vulns[cid])
                vulns[cid] = kept
            if not hit:
                raise UnknownCve(f"action {index}: {action.cve_id} is not attached in scope {action.scope}")
        elif isinstance(action, BlockLink):
            pair = {(action.from_id, action.to_id), (action.to_id, action.from_id)}
            if not pair & edges:
                raise UnknownLink(f"action {index}: no link between {action.from_id} and {action.to_id}")
            edges -= pair
        elif isinstance(action, UnblockLink):
            known = {c.id for c in topology.components} | {b.id for b in topology.buses}
            for end in (action.from_id, action.to_id):
                if end not in known:
                    raise UnknownComponent(f"action {index}: unknown node {end}")
            if action.from_id == action.to_id:
                raise SchemaViolation(f"action {index}: cannot link a node to itself")
            edges.add((action.from_id, action.to_id))
            edges.add((action.to_id, action.from_id))
        elif isinstance(action, SetStart):
            if not topology.has_node(action.node_id):
                raise UnknownComponent(f"action {index}: unknown node {action.node_id}")
        else:  # pragma: no cover - exhaustive over Action
            raise SchemaViolation(f"action {index}: unsupported action {action!r}")

    new_topology = TopologyGraph(
        components=topology.components,
        buses=topology.buses,
        zones=topology.zones,
        edges=tuple(sorted(edges)),
    )
    new_vulns = tuple(
        (cid, tuple(sorted(vulns[cid], key=lambda v: v.cve_id))) for cid in sorted(vulns)
    )
    return EnrichedGraph(topology=new_topology, vulns=new_vulns)


@dataclass(frozen=True)
class ScenarioDiff:
    """Before/after comparison of attack graphs and target probabilities."""

    edges_added: tuple[ExploitEdge, ...]
    edges_removed: tuple[ExploitEdge, ...]
    targets_delta: tuple[tuple[str, float, float], ...]  # target, p_before, p_after
    newly_reachable_zones: tuple[str, ...]


def diff(
    base: EnrichedGraph,
    variant: EnrichedGraph,
    start_id: str,
    initial: PrivilegeLevel,
    epss: EpssTable,
    max_len: int = 8,
) -> ScenarioDiff:
    """Generate and analyze both graphs from the same start and report deltas."""
    base_graph = generate(base, start_id, initial)
    variant_graph = generate(variant, start_id, initial)
    base_edges = set(base_graph.edges)
    variant_edges = set(variant_graph.edges)

    base_reports, _ = analyze_all_targets(base, epss, max_len=max_len)
    variant_reports, _ = analyze_all_targets(variant, epss, max_len=max_len)
    before = {r.target_id: r.p_target for r in base_reports}
    after = {r.target_id: r.p_target for r in variant_reports}
    targets = sorted(set(before) | set(after))

    base_zones = {base.topology.zone_of(n) for n in base_graph.nodes}
    variant_zones = {variant.topology.zone_of(n) for n in variant_graph.nodes}

    edge_key = lambda e: (e.from_id, e.to_id, e.cve_id, e.kind.value)
    return ScenarioDiff(
        edges_added=tuple(sorted(variant_edges - base_edges, key=edge_key)),
        edges_removed=tuple(sorted(base_edges - variant_edges, key=edge_key)),
        targets_delta=tuple((t, before.get(t, 0.0), after.get(t, 0.0)) for t in targets),
        newly_reachable_zones=tuple(sorted(variant_zones - base_zones)),
    )


def diff_to_json(result: ScenarioDiff, scenario_name: str) -> str:
    def edge_doc(e: ExploitEdge) -> dict:
        return {
            "from": e.from_id,
            "to": e.to_id,
            "cve_id": e.cve_id,
            "consequence": e.consequence.value,
            "kind": e.kind.value,
        }

    doc = {
        "scenario": scenario_name,
        "edges_added": [edge_doc(e) for e in result.edges_added],
        "edges_removed": [edge_doc(e) for e in result.edges_removed],
        "targets_delta": {t: {"p_before": round(b, 12), "p_after": round(a, 12)} for t, b, a in result.targets_delta},
        "newly_reachable_zones": list(result.newly_reachable_zones),
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"
