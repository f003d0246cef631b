"""Blueprint parsing and the validated connectivity graph.

The blueprint JSON describes zones, components, buses, and physical links.
Every undirected link becomes two directed edges; links flagged
``"directed": true`` yield one.  Buses are relay nodes: they appear in the
graph but are expanded away by :func:`neighbors`, so attack semantics stay
device-to-device.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

from icsgraph.errors import DanglingReference, MalformedInput, SchemaViolation, UnknownNode


class ComponentKind(Enum):
    FIREWALL = "FIREWALL"
    SWITCH = "SWITCH"
    ROUTER_GATEWAY = "ROUTER_GATEWAY"
    PLC = "PLC"
    SERVER = "SERVER"
    WORKSTATION = "WORKSTATION"
    MODULE = "MODULE"
    OTHER = "OTHER"


@dataclass(frozen=True)
class Zone:
    id: str
    name: str


@dataclass(frozen=True)
class Component:
    id: str
    display_name: str
    kind: ComponentKind
    zone_id: str
    # original kind string when it did not map onto the enum (validation warning)
    kind_raw: str | None = None


@dataclass(frozen=True)
class Bus:
    """Connectivity relay inside a zone; carries no vulnerabilities."""

    id: str
    zone_id: str


@dataclass(frozen=True)
class ValidationIssue:
    code: str
    subject_id: str
    message: str
    severity: str = "ERROR"  # ERROR | WARNING


@dataclass(frozen=True)
class TopologyGraph:
    """Immutable directed graph of components, buses, and zones."""

    components: tuple[Component, ...]
    buses: tuple[Bus, ...]
    zones: tuple[Zone, ...]
    edges: tuple[tuple[str, str], ...]

    def component_ids(self) -> tuple[str, ...]:
        return tuple(c.id for c in self.components)

    def component(self, node_id: str) -> Component:
        for c in self.components:
            if c.id == node_id:
                return c
        raise UnknownNode(f"unknown component: {node_id}")

    def zone_of(self, node_id: str) -> str:
        idx = _node_index(self)
        if node_id not in idx.zone_by_node:
            raise UnknownNode(f"unknown node: {node_id}")
        return idx.zone_by_node[node_id]

    def zone_name(self, zone_id: str) -> str:
        for z in self.zones:
            if z.id == zone_id:
                return z.name
        raise UnknownNode(f"unknown zone: {zone_id}")

    def has_node(self, node_id: str) -> bool:
        return node_id in _node_index(self).zone_by_node

    def is_bus(self, node_id: str) -> bool:
        return node_id in _node_index(self).bus_ids


@dataclass
class _Index:
    zone_by_node: dict
    bus_ids: frozenset
    out_edges: dict


@lru_cache(maxsize=64)
def _node_index(graph: TopologyGraph) -> _Index:
    zone_by_node = {c.id: c.zone_id for c in graph.components}
    zone_by_node.update({b.id: b.zone_id for b in graph.buses})
    out: dict[str, list[str]] = {}
    for a, b in graph.edges:
        out.setdefault(a, []).append(b)
    return _Index(
        zone_by_node=zone_by_node,
        bus_ids=frozenset(b.id for b in graph.buses),
        out_edges={k: sorted(v) for k, v in out.items()},
    )


def parse_blueprint(text: str) -> TopologyGraph:
    """Parse a blueprint JSON document into a validated TopologyGraph.

    Raises MalformedInput on JSON syntax errors, SchemaViolation on missing
    or ill-typed fields and duplicate ids, DanglingReference when a link or
    zone reference names an undeclared id.  Unknown kind strings map to
    OTHER and surface later as a validation warning.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"blueprint is not valid JSON: {exc.msg} (line {exc.lineno}, column {exc.colno})") from exc
    if not isinstance(doc, dict):
        raise SchemaViolation("blueprint root must be a JSON object")

    zones = [_parse_zone(z) for z in _require_list(doc, "zones")]
    components = [_parse_component(c) for c in doc.get("components", [])]
    buses = [_parse_bus(b) for b in doc.get("buses", [])]

    seen: set[str] = set()
    for zid in (z.id for z in zones):
        if zid in seen:
            raise SchemaViolation(f"duplicate zone id: {zid}")
        seen.add(zid)
    zone_ids = set(seen)
    seen = set()
    for nid in [c.id for c in components] + [b.id for b in buses]:
        if nid in seen:
            raise SchemaViolation(f"duplicate node id: {nid}")
        seen.add(nid)
    node_ids = set(seen)

    for c in components:
        if c.zone_id not in zone_ids:
            raise DanglingReference(f"component {c.id} references unknown zone {c.zone_id}")
    for b in buses:
        if b.zone_id not in zone_ids:
            raise DanglingReference(f"bus {b.id} references unknown zone {b.zone_id}")

    edges: set[tuple[str, str]] = set()
    for raw in doc.get("links", []):
        if not isinstance(raw, dict):
            raise SchemaViolation("link entries must be objects")
        src = _require_str(raw, "from", "link")
        dst = _require_str(raw, "to", "link")
        if src == dst:
            raise SchemaViolation(f"self-loop link on {src}")
        for end in (src, dst):
            if end not in node_ids:
                raise DanglingReference(f"link references unknown node {end}")
        edges.add((src, dst))
        if not raw.get("directed", False):
            edges.add((dst, src))

    return TopologyGraph(
        components=tuple(sorted(components, key=lambda c: c.id)),
        buses=tuple(sorted(buses, key=lambda b: b.id)),
        zones=tuple(sorted(zones, key=lambda z: z.id)),
        edges=tuple(sorted(edges)),
    )


def _require_list(doc: dict, key: str) -> list:
    value = doc.get(key)
    if not isinstance(value, list):
        raise SchemaViolation(f"missing or ill-typed field: {key}")
    return value


def _require_str(obj: dict, key: str, where: str) -> str:
    value = obj.get(key)
    if not isinstance(value, str) or not value:
        raise SchemaViolation(f"{where}: missing or empty field {key!r}")
    return value


def _parse_zone(raw: object) -> Zone:
    if not isinstance(raw, dict):
        raise SchemaViolation("zone entries must be objects")
    return Zone(id=_require_str(raw, "id", "zone"), name=_require_str(raw, "name", "zone"))


def _parse_component(raw: object) -> Component:
    if not isinstance(raw, dict):
        raise SchemaViolation("component entries must be objects")
    cid = _require_str(raw, "id", "component")
    kind_str = _require_str(raw, "kind", f"component {cid}")
    try:
        kind, kind_raw = ComponentKind(kind_str), None
    except ValueError:
        kind, kind_raw = ComponentKind.OTHER, kind_str
    return Component(
        id=cid,
        display_name=_require_str(raw, "name", f"component {cid}"),
        kind=kind,
        zone_id=_require_str(raw, "zone", f"component {cid}"),
        kind_raw=kind_raw,
    )


def _parse_bus(raw: object) -> Bus:
    if not isinstance(raw, dict):
        raise SchemaViolation("bus entries must be objects")
    bid = _require_str(raw, "id", "bus")
    return Bus(id=bid, zone_id=_require_str(raw, "zone", f"bus {bid}"))


def validate(graph: TopologyGraph) -> list[ValidationIssue]:
    """Check every graph invariant; issues are data, not exceptions."""
    issues: list[ValidationIssue] = []
    zone_ids = {z.id for z in graph.zones}
    node_ids: set[str] = set()

    for nid in [c.id for c in graph.components] + [b.id for b in graph.buses]:
        if not nid:
            issues.append(ValidationIssue("EMPTY_ID", nid, "empty node id"))
        if nid in node_ids:
            issues.append(ValidationIssue("DUP_ID", nid, f"id {nid} declared more than once"))
        node_ids.add(nid)
    for zid in zone_ids:
        if sum(1 for z in graph.zones if z.id == zid) > 1:
            issues.append(ValidationIssue("DUP_ID", zid, f"zone id {zid} declared more than once"))

    for c in graph.components:
        if c.zone_id not in zone_ids:
            issues.append(ValidationIssue("ZONE_UNKNOWN", c.id, f"component {c.id} in unknown zone {c.zone_id}"))
        if c.kind_raw is not None:
            issues.append(
                ValidationIssue("KIND_UNKNOWN", c.id, f"kind {c.kind_raw!r} mapped to OTHER", severity="WARNING")
            )
    for b in graph.buses:
        if b.zone_id not in zone_ids:
            issues.append(ValidationIssue("ZONE_UNKNOWN", b.id, f"bus {b.id} in unknown zone {b.zone_id}"))

    for a, b in graph.edges:
        if a == b:
            issues.append(ValidationIssue("SELF_LOOP", a, f"self-loop edge on {a}"))
        for end in (a, b):
            if end not in node_ids:
                issues.append(ValidationIssue("EDGE_UNKNOWN_NODE", end, f"edge ({a}, {b}) references unknown node {end}"))

    return issues


def neighbors(graph: TopologyGraph, node_id: str) -> list[str]:
    """Device ids reachable over one hop, with buses transparently expanded.

    A device reached through any chain of buses counts as directly
    reachable; buses never appear in the result, nor does the origin node.
    """
    idx = _node_index(graph)
    if node_id not in idx.zone_by_node:
        raise UnknownNode(f"unknown node: {node_id}")
    found: set[str] = set()
    seen_buses: set[str] = set()
    frontier = [node_id]
    while frontier:
        current = frontier.pop()
        for nxt in idx.out_edges.get(current, ()):
            if nxt in idx.bus_ids:
                if nxt not in seen_buses:
                    seen_buses.add(nxt)
                    frontier.append(nxt)
            elif nxt != node_id:
                found.add(nxt)
    return sorted(found)


def serialize_graph(graph: TopologyGraph) -> str:
    """Canonical JSON form; stable byte-for-byte across runs."""
    doc = {
        "zones": [{"id": z.id, "name": z.name} for z in graph.zones],
        "components": [
            {
                "id": c.id,
                "name": c.display_name,
                "kind": c.kind.value,
                "zone": c.zone_id,
                **({"kind_raw": c.kind_raw} if c.kind_raw is not None else {}),
            }
            for c in graph.components
        ],
        "buses": [{"id": b.id, "zone": b.zone_id} for b in graph.buses],
        "edges": [[a, b] for a, b in graph.edges],
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def parse_graph_json(text: str) -> TopologyGraph:
    """Inverse of :func:`serialize_graph`."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"graph document is not valid JSON: {exc.msg}") from exc
    components = tuple(
        sorted(
            (
                Component(
                    id=c["id"],
                    display_name=c["name"],
                    kind=ComponentKind(c["kind"]),
                    zone_id=c["zone"],
                    kind_raw=c.get("kind_raw"),
                )
                for c in doc.get("components", [])
            ),
            key=lambda c: c.id,
        )
    )
    buses = tuple(sorted((Bus(id=b["id"], zone_id=b["zone"]) for b in doc.get("buses", [])), key=lambda b: b.id))
    zones = tuple(sorted((Zone(id=z["id"], name=z["name"]) for z in doc.get("zones", [])), key=lambda z: z.id))
    edges = tuple(sorted((e[0], e[1]) for e in doc.get("edges", [])))
    return TopologyGraph(components=components, buses=buses, zones=zones, edges=edges)
