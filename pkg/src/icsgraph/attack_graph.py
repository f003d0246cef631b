"""Stateful attack-graph traversal and exhaustive path enumeration.

The simulation walks the four-step loop: escalate locally, enumerate
neighbors, check preconditions, exploit.  Privilege is node-local: arriving
at a node via CVE c leaves the attacker holding exactly c's consequence
there, raised only by local escalations on that same node.

Vulnerabilities split into two exploit classes by CVSS attack vector:
AV:N/AV:A records (and records without a vector) can be exploited from a
neighboring node; AV:L/AV:P records only ever fire as local escalations.
Fallback-classified records are excluded from exploitation entirely, which
is exactly the effect their (OS(ADMIN), NONE) assignment is meant to have.

The generated graph is the least fixpoint of the privilege map, so output
is independent of work-list order and removing a vulnerability can only
shrink the edge set.
"""

from __future__ import annotations

import json
import warnings
from collections import deque
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from enum import Enum

from icsgraph.errors import MalformedInput, MaxLenExceededWarning, SchemaViolation, UnknownNode, UnknownStartNode
from icsgraph.model import FALLBACK, ClassifiedVuln, PrivilegeLevel, join, satisfies
from icsgraph.topology import neighbors
from icsgraph.vulnerability import EnrichedGraph, parse_cvss_vector

DEFAULT_MAX_LEN = 8


class EdgeKind(Enum):
    LATERAL = "LATERAL"
    LOCAL = "LOCAL"


@dataclass(frozen=True)
class ExploitEdge:
    from_id: str
    to_id: str
    cve_id: str
    consequence: PrivilegeLevel
    kind: EdgeKind

    def __post_init__(self) -> None:
        if self.kind is EdgeKind.LOCAL and self.from_id != self.to_id:
            raise SchemaViolation("LOCAL edges must be self-loops")
        if self.kind is EdgeKind.LATERAL and self.from_id == self.to_id:
            raise SchemaViolation("LATERAL edges must connect distinct nodes")


@dataclass(frozen=True)
class AttackGraph:
    """Exploit-labeled directed graph of feasible transitions from one start."""

    start_id: str
    initial_privilege: PrivilegeLevel
    nodes: tuple[str, ...]
    edges: tuple[ExploitEdge, ...]
    best_state: tuple[tuple[str, PrivilegeLevel], ...]
    zones: tuple[tuple[str, str], ...]  # node id -> zone id, for export clustering

    def best_privilege(self, node_id: str) -> PrivilegeLevel | None:
        for nid, priv in self.best_state:
            if nid == node_id:
                return priv
        return None


@dataclass(frozen=True)
class AttackPath:
    """One ordered exploit chain from a source to a target."""

    node_sequence: tuple[str, ...]
    exploit_sequence: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(set(self.node_sequence)) != len(self.node_sequence):
            raise SchemaViolation("attack path must be a simple path")
        if not self.exploit_sequence:
            raise SchemaViolation("attack path must contain at least one exploit")

    @property
    def length(self) -> int:
        return len(self.exploit_sequence)

    @property
    def source(self) -> str:
        return self.node_sequence[0]

    @property
    def target(self) -> str:
        return self.node_sequence[-1]


def _exploitable(vuln: ClassifiedVuln) -> bool:
    return vuln.rule_id != FALLBACK


def _is_remote(vuln: ClassifiedVuln) -> bool:
    return parse_cvss_vector(vuln.record.cvss_vector).remote


def _local_vulns(enriched: EnrichedGraph, node_id: str) -> list[ClassifiedVuln]:
    return sorted(
        (v for v in enriched.vulns_for(node_id) if _exploitable(v) and not _is_remote(v)),
        key=lambda v: v.cve_id,
    )


def _remote_vulns(enriched: EnrichedGraph, node_id: str) -> list[ClassifiedVuln]:
    return sorted(
        (v for v in enriched.vulns_for(node_id) if _exploitable(v) and _is_remote(v)),
        key=lambda v: v.cve_id,
    )


def _climb(enriched: EnrichedGraph, node_id: str, privilege: PrivilegeLevel) -> PrivilegeLevel:
    """Local-escalation fixpoint: join consequences of satisfiable local vulns."""
    current = privilege
    changed = True
    while changed:
        changed = False
        for v in _local_vulns(enriched, node_id):
            if satisfies(current, v.precondition):
                raised = join(current, v.consequence)
                if raised is not current:
                    current = raised
                    changed = True
    return current


def generate(enriched: EnrichedGraph, start_id: str, initial: PrivilegeLevel) -> AttackGraph:
    """Simulate attacker movement from ``start_id`` held at ``initial`` privilege.

    Work-list over (node, privilege): a pair is processed at most once, and a
    node re-enters only when an arrival strictly raises its best privilege.
    Nodes with no satisfiable vulnerability terminate branches (barriers).
    """
    topology = enriched.topology
    if not topology.has_node(start_id) or topology.is_bus(start_id):
        raise UnknownStartNode(f"start node {start_id!r} is not a device in the topology")

    best: dict[str, PrivilegeLevel] = {start_id: _climb(enriched, start_id, initial)}
    work: deque[str] = deque([start_id])

    while work:
        node = work.popleft()
        privilege = best[node]
        for neighbor in neighbors(topology, node):
            for vuln in _remote_vulns(enriched, neighbor):
                if not satisfies(privilege, vuln.precondition):
                    continue
                if neighbor in best:
                    candidate = _climb(enriched, neighbor, join(best[neighbor], vuln.consequence))
                    if satisfies(best[neighbor], candidate):
                        continue  # no strict gain; (node, privilege) pair already covered
                else:
                    candidate = _climb(enriched, neighbor, vuln.consequence)
                best[neighbor] = candidate
                work.append(neighbor)

    edges: set[ExploitEdge] = set()
    for node in sorted(best):
        privilege = best[node]
        for vuln in _local_vulns(enriched, node):
            if satisfies(privilege, vuln.precondition):
                edges.add(ExploitEdge(node, node, vuln.cve_id, vuln.consequence, EdgeKind.LOCAL))
        for neighbor in neighbors(topology, node):
            for vuln in _remote_vulns(enriched, neighbor):
                if satisfies(privilege, vuln.precondition):
                    edges.add(ExploitEdge(node, neighbor, vuln.cve_id, vuln.consequence, EdgeKind.LATERAL))

    nodes = tuple(sorted(set(best) | {e.to_id for e in edges}))
    zone_map = tuple((n, topology.zone_of(n)) for n in nodes)
    return AttackGraph(
        start_id=start_id,
        initial_privilege=initial,
        nodes=nodes,
        edges=tuple(sorted(edges, key=lambda e: (e.from_id, e.to_id, e.cve_id, e.kind.value))),
        best_state=tuple(sorted(best.items())),
        zones=zone_map,
    )


def _minimal_climbs(
    local_vulns: list[ClassifiedVuln], start: PrivilegeLevel, required: PrivilegeLevel
) -> list[tuple[tuple[ClassifiedVuln, ...], PrivilegeLevel]]:
    """Every subset-minimal local-escalation sequence raising ``start`` to satisfy ``required``.

    A subset is feasible when all of its members can fire (monotone closure,
    so firing order cannot change feasibility); the canonical sequence fires
    the lowest cve_id that is satisfiable at each step.
    """
    if satisfies(start, required):
        return [((), start)]
    results: list[tuple[tuple[ClassifiedVuln, ...], PrivilegeLevel]] = []
    accepted_sets: list[frozenset[str]] = []
    n = len(local_vulns)
    subsets = sorted(range(1, 1 << n), key=lambda m: (bin(m).count("1"), m))
    for mask in subsets:
        members = [local_vulns[i] for i in range(n) if mask >> i & 1]
        ids = frozenset(v.cve_id for v in members)
        if any(prev <= ids for prev in accepted_sets):
            continue
        fired: list[ClassifiedVuln] = []
        current = start
        pending = list(members)
        progressed = True
        while pending and progressed:
            progressed = False
            for v in pending:
                if satisfies(current, v.precondition):
                    fired.append(v)
                    current = join(current, v.consequence)
                    pending.remove(v)
                    progressed = True
                    break
        if pending or not satisfies(current, required):
            continue
        accepted_sets.append(ids)
        results.append((tuple(fired), current))
    results.sort(key=lambda item: (len(item[0]), tuple(v.cve_id for v in item[0])))
    return results


def enumerate_paths(
    enriched: EnrichedGraph,
    source_id: str,
    target_id: str,
    max_len: int = DEFAULT_MAX_LEN,
    initial: PrivilegeLevel = PrivilegeLevel.OS_ADMIN,
) -> list[AttackPath]:
    """All simple exploit paths from source to target, privilege replayed per prefix.

    Sources are assumed compromised (OS(ADMIN) unless overridden).  Local
    escalations appear in the exploit sequence exactly when needed to satisfy
    the next hop's precondition, one path per subset-minimal escalation set.
    Results are deduplicated and sorted by length, then lexicographically.
    """
    topology = enriched.topology
    for node_id in (source_id, target_id):
        if not topology.has_node(node_id) or topology.is_bus(node_id):
            raise UnknownNode(f"unknown device: {node_id}")
    if source_id == target_id:
        raise SchemaViolation("source and target must differ")
    if max_len < 1:
        raise SchemaViolation("max_len must be >= 1")

    found: set[AttackPath] = set()
    truncated = False

    def walk(node: str, privilege: PrivilegeLevel, visited: frozenset[str], node_seq: tuple[str, ...], exploit_seq: tuple[str, ...]) -> None:
        nonlocal truncated
        for neighbor in neighbors(topology, node):
            if neighbor in visited:
                continue
            for vuln in _remote_vulns(enriched, neighbor):
                for climb_seq, climbed in _minimal_climbs(_local_vulns(enriched, node), privilege, vuln.precondition):
                    if not satisfies(climbed, vuln.precondition):
                        continue
                    steps = len(exploit_seq) + len(climb_seq) + 1
                    if steps > max_len:
                        truncated = True
                        continue
                    new_exploits = exploit_seq + tuple(v.cve_id for v in climb_seq) + (vuln.cve_id,)
                    new_nodes = node_seq + (neighbor,)
                    if neighbor == target_id:
                        found.add(AttackPath(node_sequence=new_nodes, exploit_sequence=new_exploits))
                    else:
                        walk(neighbor, vuln.consequence, visited | {neighbor}, new_nodes, new_exploits)

    walk(source_id, initial, frozenset({source_id}), (source_id,), ())
    if truncated:
        warnings.warn(MaxLenExceededWarning(f"paths beyond {max_len} exploit steps were not enumerated"))
    return sorted(found, key=lambda p: (p.length, p.node_sequence, p.exploit_sequence))


@dataclass(frozen=True)
class PathStats:
    count: int
    mean_len: float | None
    median_len: float | None
    max_len: int | None


def path_stats(paths: list[AttackPath]) -> PathStats:
    """Count, mean (2 decimals, half-up), lower-middle median, and max of path lengths."""
    if not paths:
        return PathStats(count=0, mean_len=None, median_len=None, max_len=None)
    lengths = sorted(p.length for p in paths)
    mean = Decimal(sum(lengths)) / Decimal(len(lengths))
    mean = mean.quantize(Decimal("0.01"), rounding=ROUND_HALF_UP)
    median = lengths[(len(lengths) - 1) // 2]
    return PathStats(count=len(lengths), mean_len=float(mean), median_len=float(median), max_len=lengths[-1])


# ---------------------------------------------------------------------------
# Export
# ---------------------------------------------------------------------------


class ExportFormat(Enum):
    DOT = "DOT"
    JSON = "JSON"


def export(graph: AttackGraph, fmt: ExportFormat) -> str:
    if fmt is ExportFormat.JSON:
        return attack_graph_to_json(graph)
    return _to_dot(graph)


def _dot_quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _to_dot(graph: AttackGraph) -> str:
    lines = ["digraph attack_graph {", "  rankdir=TB;"]
    zone_of = dict(graph.zones)
    by_zone: dict[str, list[str]] = {}
    for node in graph.nodes:
        by_zone.setdefault(zone_of.get(node, ""), []).append(node)
    for i, zone_id in enumerate(sorted(by_zone)):
        lines.append(f"  subgraph cluster_{i} {{")
        lines.append(f"    label={_dot_quote(zone_id)};")
        for node in sorted(by_zone[zone_id]):
            lines.append(f"    {_dot_quote(node)};")
        lines.append("  }")
    for edge in graph.edges:
        label = _dot_quote(f"{edge.cve_id} => {edge.consequence.value}")
        style = ", style=dashed" if edge.kind is EdgeKind.LOCAL else ""
        lines.append(f"  {_dot_quote(edge.from_id)} -> {_dot_quote(edge.to_id)} [label={label}{style}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def attack_graph_to_json(graph: AttackGraph) -> str:
    doc = {
        "start": graph.start_id,
        "initial_privilege": graph.initial_privilege.value,
        "nodes": list(graph.nodes),
        "edges": [
            {
                "from": e.from_id,
                "to": e.to_id,
                "cve_id": e.cve_id,
                "consequence": e.consequence.value,
                "kind": e.kind.value,
            }
            for e in graph.edges
        ],
        "best_state": {n: p.value for n, p in graph.best_state},
        "zones": {n: z for n, z in graph.zones},
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def attack_graph_from_json(text: str) -> AttackGraph:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"attack graph document is not valid JSON: {exc.msg}") from exc
    edges = tuple(
        sorted(
            (
                ExploitEdge(
                    from_id=e["from"],
                    to_id=e["to"],
                    cve_id=e["cve_id"],
                    consequence=PrivilegeLevel.parse(e["consequence"]),
                    kind=EdgeKind(e["kind"]),
                )
                for e in doc.get("edges", [])
            ),
            key=lambda e: (e.from_id, e.to_id, e.cve_id, e.kind.value),
        )
    )
    return AttackGraph(
        start_id=doc["start"],
        initial_privilege=PrivilegeLevel.parse(doc["initial_privilege"]),
        nodes=tuple(sorted(doc.get("nodes", []))),
        edges=edges,
        best_state=tuple(sorted((n, PrivilegeLevel.parse(p)) for n, p in doc.get("best_state", {}).items())),
        zones=tuple(sorted(doc.get("zones", {}).items())),
    )
