"""Device-to-CVE matching and rule-based (precondition, consequence) classification.

Matching is curated-alias substring search against advisory product lists,
deliberately ignoring firmware versions and patch level.  Classification
walks an ordered rule knowledge base (shipped as ``data/rules.json``); the
first matching rule fully determines the (precondition, consequence) pair.
Records no rule matches get the conservative fallback (OS(ADMIN), NONE),
which the traversal treats as unexploitable.
"""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass
from importlib import resources

from icsgraph.errors import MalformedInput, RuleSetError, SchemaViolation, UnparseableVector
from icsgraph.model import FALLBACK, ClassifiedVuln, PrivilegeLevel, VulnRecord
from icsgraph.topology import TopologyGraph

logger = logging.getLogger(__name__)

# v2 Authentication -> v3 Privileges Required bridge
_AU_TO_PR = {"N": "N", "S": "L", "M": "H"}
# v2 impact letters (None/Partial/Complete) -> v3 letters (None/Low/High)
_V2_IMPACT = {"N": "N", "P": "L", "C": "H"}

_V3_HEAD = re.compile(r"^CVSS:3\.[01]/")
_FIELD_RE = re.compile(r"^[A-Za-z]{1,3}:[A-Za-z]$")


@dataclass(frozen=True)
class CvssFields:
    """Normalized CVSS fields used by classification rules.

    v2 vectors are bridged onto the v3 vocabulary: Au maps to PR via
    {N->N, S->L, M->H} and Partial/Complete impacts map to L/H.  ``version``
    is None for the distinguished ABSENT value (record had no vector).
    """

    version: str | None
    av: str | None = None
    ac: str | None = None
    pr: str | None = None
    ui: str | None = None
    s: str | None = None
    c: str | None = None
    i: str | None = None
    a: str | None = None

    @property
    def present(self) -> bool:
        return self.version is not None

    @property
    def full_impact(self) -> bool:
        return self.present and (self.c, self.i, self.a) == ("H", "H", "H")

    @property
    def partial_impact(self) -> bool:
        """Some impact, but not High across the board."""
        if not self.present:
            return False
        impacts = (self.c, self.i, self.a)
        return not self.full_impact and any(x in ("L", "H") for x in impacts)

    @property
    def remote(self) -> bool:
        """Exploitable from a neighboring node (network/adjacent attack vector).

        AV:L and AV:P vulnerabilities require presence on the device and can
        only be used for local escalation.  Records without a vector are
        treated as remotely exploitable.
        """
        return self.av not in ("L", "P")


ABSENT = CvssFields(version=None)


def parse_cvss_vector(vector: str | None) -> CvssFields:
    """Parse a CVSS v2 or v3.x vector into normalized fields.

    Returns the distinguished ABSENT value when the record carries no
    vector; raises UnparseableVector for anything that is neither grammar.
    """
    if vector is None or vector == "":
        return ABSENT
    text = vector.strip()
    if text.startswith("CVSS:"):
        if not _V3_HEAD.match(text):
            raise UnparseableVector(f"unsupported CVSS version in {vector!r}")
        version = text.split("/", 1)[0].removeprefix("CVSS:")
        fields = _split_fields(text.split("/", 1)[1], vector)
        _check_values(fields, vector, v3=True)
        return CvssFields(
            version=version,
            av=fields.get("AV"),
            ac=fields.get("AC"),
            pr=fields.get("PR"),
            ui=fields.get("UI"),
            s=fields.get("S"),
            c=fields.get("C"),
            i=fields.get("I"),
            a=fields.get("A"),
        )
    fields = _split_fields(text, vector)
    if "PR" in fields or "UI" in fields:
        raise UnparseableVector(f"v3 fields in unversioned vector {vector!r}")
    _check_values(fields, vector, v3=False)
    return CvssFields(
        version="2.0",
        av=fields.get("AV"),
        ac=fields.get("AC"),
        pr=_AU_TO_PR.get(fields.get("Au", "")),
        c=_V2_IMPACT.get(fields.get("C", "")),
        i=_V2_IMPACT.get(fields.get("I", "")),
        a=_V2_IMPACT.get(fields.get("A", "")),
    )


def _split_fields(body: str, original: str) -> dict[str, str]:
    fields: dict[str, str] = {}
    for part in body.split("/"):
        if not _FIELD_RE.match(part):
            raise UnparseableVector(f"bad vector segment {part!r} in {original!r}")
        key, value = part.split(":")
        if key in fields:
            raise UnparseableVector(f"repeated field {key} in {original!r}")
        fields[key] = value
    return fields


_V3_VALUES = {
    "AV": "NALP",
    "AC": "LH",
    "PR": "NLH",
    "UI": "NR",
    "S": "UC",
    "C": "NLH",
    "I": "NLH",
    "A": "NLH",
}
_V2_VALUES = {"AV": "NAL", "AC": "LMH", "Au": "NSM", "C": "NPC", "I": "NPC", "A": "NPC"}


def _check_values(fields: dict[str, str], original: str, v3: bool) -> None:
    table = _V3_VALUES if v3 else _V2_VALUES
    for key, value in fields.items():
        allowed = table.get(key)
        if allowed is not None and value not in allowed:
            raise UnparseableVector(f"bad value {key}:{value} in {original!r}")


# ---------------------------------------------------------------------------
# Advisories and aliases
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Advisory:
    advisory_id: str
    affected_products: tuple[str, ...]
    cves: tuple[VulnRecord, ...]


@dataclass(frozen=True)
class AdvisoryDb:
    advisories: tuple[Advisory, ...]


def load_advisories(text: str) -> AdvisoryDb:
    """Parse an ssa.json document (list of vendor advisories)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"advisory document is not valid JSON: {exc.msg}") from exc
    if not isinstance(doc, list):
        raise SchemaViolation("advisory document root must be a list")
    advisories = []
    seen: set[str] = set()
    for raw in doc:
        aid = raw.get("advisory_id")
        if not isinstance(aid, str) or not aid:
            raise SchemaViolation("advisory missing advisory_id")
        if aid in seen:
            raise SchemaViolation(f"duplicate advisory_id: {aid}")
        seen.add(aid)
        cves = tuple(
            VulnRecord(
                cve_id=c["cve_id"],
                cvss_vector=c.get("cvss_vector"),
                description=c.get("description", ""),
                source_advisory=aid,
                artificial=bool(c.get("artificial", False)),
            )
            for c in raw.get("cves", [])
        )
        advisories.append(
            Advisory(advisory_id=aid, affected_products=tuple(raw.get("affected_products", [])), cves=cves)
        )
    return AdvisoryDb(advisories=tuple(sorted(advisories, key=lambda a: a.advisory_id)))


@dataclass(frozen=True)
class AliasTable:
    entries: tuple[tuple[str, tuple[str, ...]], ...]

    def aliases_for(self, component_id: str) -> tuple[str, ...]:
        for cid, aliases in self.entries:
            if cid == component_id:
                return aliases
        return ()


def load_aliases(text: str) -> AliasTable:
    """Parse a component_aliases.json document: {component_id: [alias, ...]}."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"alias document is not valid JSON: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise SchemaViolation("alias document root must be an object")
    entries = []
    for cid, aliases in sorted(doc.items()):
        if not isinstance(aliases, list) or not aliases or not all(isinstance(a, str) and a for a in aliases):
            raise SchemaViolation(f"alias list for {cid} must be a non-empty list of strings")
        entries.append((cid, tuple(aliases)))
    return AliasTable(entries=tuple(entries))


def validate_aliases(table: AliasTable, topology: TopologyGraph) -> None:
    known = set(topology.component_ids())
    for cid, _ in table.entries:
        if cid not in known:
            raise SchemaViolation(f"alias table references unknown component {cid}")


def match_components(
    topology: TopologyGraph, aliases: AliasTable, db: AdvisoryDb
) -> dict[str, list[VulnRecord]]:
    """Map each component to the advisory CVEs its aliases match.

    A component receives a record iff any of its aliases is a
    case-insensitive substring of any affected_products entry of an advisory
    containing that record.  Deduplicated by cve_id per component; the
    first-seen advisory wins on conflict.
    """
    validate_aliases(aliases, topology)
    matches: dict[str, list[VulnRecord]] = {cid: [] for cid in topology.component_ids()}
    for cid in topology.component_ids():
        names = [a.lower() for a in aliases.aliases_for(cid)]
        if not names:
            continue
        by_cve: dict[str, VulnRecord] = {}
        for advisory in db.advisories:
            products = [p.lower() for p in advisory.affected_products]
            if not any(alias in product for alias in names for product in products):
                continue
            for record in advisory.cves:
                if record.cve_id in by_cve:
                    logger.warning(
                        "%s: %s already attached via %s; ignoring copy from %s",
                        cid,
                        record.cve_id,
                        by_cve[record.cve_id].source_advisory,
                        advisory.advisory_id,
                    )
                    continue
                by_cve[record.cve_id] = record
        matches[cid] = [by_cve[k] for k in sorted(by_cve)]
    return matches


# ---------------------------------------------------------------------------
# Classification rules
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RuleMatch:
    """Pure predicate over a record's CVSS fields and description.

    ``cvss`` lists allowed values per field (all listed fields must match,
    and a vector must be present).  ``impact`` is "full" (C:H/I:H/A:H) or
    "partial".  ``keywords`` is a list of any-of groups; every group must
    hit the description (case-insensitive substring).
    """

    cvss: tuple[tuple[str, tuple[str, ...]], ...] = ()
    impact: str | None = None
    keywords: tuple[tuple[str, ...], ...] = ()

    def matches(self, record: VulnRecord, fields: CvssFields) -> bool:
        if self.cvss or self.impact:
            if not fields.present:
                return False
        for name, allowed in self.cvss:
            if getattr(fields, name.lower()) not in allowed:
                return False
        if self.impact == "full" and not fields.full_impact:
            return False
        if self.impact == "partial" and not fields.partial_impact:
            return False
        text = record.description.lower()
        for group in self.keywords:
            if not any(kw.lower() in text for kw in group):
                return False
        return True


@dataclass(frozen=True)
class ClassificationRule:
    rule_id: str
    priority: int
    match: RuleMatch
    precondition: PrivilegeLevel
    consequence: PrivilegeLevel


def load_rules(text: str) -> tuple[ClassificationRule, ...]:
    """Parse rules.json; rejects duplicate ids or priorities (order must be total)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"rules document is not valid JSON: {exc.msg}") from exc
    if not isinstance(doc, list):
        raise SchemaViolation("rules document root must be a list")
    rules = []
    for raw in doc:
        match_raw = raw.get("match", {})
        rules.append(
            ClassificationRule(
                rule_id=raw["rule_id"],
                priority=int(raw["priority"]),
                match=RuleMatch(
                    cvss=tuple(sorted((k, tuple(v)) for k, v in match_raw.get("cvss", {}).items())),
                    impact=match_raw.get("impact"),
                    keywords=tuple(tuple(g) for g in match_raw.get("keywords", [])),
                ),
                precondition=PrivilegeLevel.parse(raw["precondition"]),
                consequence=PrivilegeLevel.parse(raw["consequence"]),
            )
        )
    ids = [r.rule_id for r in rules]
    if len(set(ids)) != len(ids):
        raise RuleSetError("duplicate rule_id in rule set")
    priorities = [r.priority for r in rules]
    if len(set(priorities)) != len(priorities):
        raise RuleSetError("duplicate priorities in rule set; rule order must be total")
    return tuple(sorted(rules, key=lambda r: r.priority))


def default_rules() -> tuple[ClassificationRule, ...]:
    """The rule knowledge base shipped with the package."""
    text = resources.files("icsgraph").joinpath("data", "rules.json").read_text(encoding="utf-8")
    return load_rules(text)


def classify(record: VulnRecord, rules: tuple[ClassificationRule, ...]) -> ClassifiedVuln:
    """First matching rule wins; no match yields the conservative fallback."""
    fields = parse_cvss_vector(record.cvss_vector)
    for rule in rules:
        if rule.match.matches(record, fields):
            return ClassifiedVuln(
                record=record,
                precondition=rule.precondition,
                consequence=rule.consequence,
                rule_id=rule.rule_id,
            )
    return ClassifiedVuln(
        record=record,
        precondition=PrivilegeLevel.OS_ADMIN,
        consequence=PrivilegeLevel.NONE,
        rule_id=FALLBACK,
    )


# ---------------------------------------------------------------------------
# Enriched graph
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EnrichedGraph:
    """Topology plus per-component classified vulnerabilities."""

    topology: TopologyGraph
    vulns: tuple[tuple[str, tuple[ClassifiedVuln, ...]], ...]

    def vulns_for(self, component_id: str) -> tuple[ClassifiedVuln, ...]:
        for cid, vs in self.vulns:
            if cid == component_id:
                return vs
        return ()

    def all_cve_ids(self) -> set[str]:
        return {v.cve_id for _, vs in self.vulns for v in vs}


def enrich(
    topology: TopologyGraph,
    matches: dict[str, list[VulnRecord]],
    rules: tuple[ClassificationRule, ...],
) -> EnrichedGraph:
    """Classify every matched record and attach it to its component."""
    known = set(topology.component_ids())
    pairs = []
    for cid in sorted(matches):
        if cid not in known:
            raise SchemaViolation(f"match map references unknown component {cid}")
        classified = tuple(classify(r, rules) for r in sorted(matches[cid], key=lambda r: r.cve_id))
        pairs.append((cid, classified))
    for cid in sorted(known - set(matches)):
        pairs.append((cid, ()))
    return EnrichedGraph(topology=topology, vulns=tuple(sorted(pairs)))


# Table-style row order for count summaries.
_PRECONDITION_ROWS = (
    PrivilegeLevel.APP_ADMIN,
    PrivilegeLevel.APP_USER,
    PrivilegeLevel.NONE,
    PrivilegeLevel.OS_ADMIN,
    PrivilegeLevel.OS_USER,
)
_CONSEQUENCE_ROWS = (PrivilegeLevel.NONE, PrivilegeLevel.OS_ADMIN, PrivilegeLevel.OS_USER)


@dataclass(frozen=True)
class CategoryCounts:
    """Counts of classified vulnerabilities per category.

    Fallback-classified records are reported on their own row rather than
    inside the precondition/consequence breakdown.
    """

    preconditions: tuple[tuple[str, int], ...]
    consequences: tuple[tuple[str, int], ...]
    fallback: int


def summarize(enriched: EnrichedGraph) -> CategoryCounts:
    pre: dict[PrivilegeLevel, int] = {p: 0 for p in _PRECONDITION_ROWS}
    cons: dict[PrivilegeLevel, int] = {p: 0 for p in _CONSEQUENCE_ROWS}
    fallback = 0
    for _, vs in enriched.vulns:
        for v in vs:
            if v.rule_id == FALLBACK:
                fallback += 1
                continue
            pre[v.precondition] += 1
            cons[v.consequence] += 1
    return CategoryCounts(
        preconditions=tuple((p.value, pre[p]) for p in _PRECONDITION_ROWS),
        consequences=tuple((p.value, cons[p]) for p in _CONSEQUENCE_ROWS),
        fallback=fallback,
    )


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def enriched_to_json(enriched: EnrichedGraph) -> str:
    from icsgraph.topology import serialize_graph  # local to avoid cycle at import

    doc = {
        "topology": json.loads(serialize_graph(enriched.topology)),
        "vulns": {
            cid: [
                {
                    "cve_id": v.record.cve_id,
                    "cvss_vector": v.record.cvss_vector,
                    "description": v.record.description,
                    "source_advisory": v.record.source_advisory,
                    "artificial": v.record.artificial,
                    "precondition": v.precondition.value,
                    "consequence": v.consequence.value,
                    "rule_id": v.rule_id,
                }
                for v in vs
            ]
            for cid, vs in enriched.vulns
        },
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def enriched_from_json(text: str) -> EnrichedGraph:
    from icsgraph.topology import parse_graph_json

    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"enriched document is not valid JSON: {exc.msg}") from exc
    topology = parse_graph_json(json.dumps(doc["topology"]))
    pairs = []
    for cid, raw_list in sorted(doc.get("vulns", {}).items()):
        vs = tuple(
            ClassifiedVuln(
                record=VulnRecord(
                    cve_id=r["cve_id"],
                    cvss_vector=r.get("cvss_vector"),
                    description=r.get("description", ""),
                    source_advisory=r.get("source_advisory", ""),
                    artificial=bool(r.get("artificial", False)),
                ),
                precondition=PrivilegeLevel.parse(r["precondition"]),
                consequence=PrivilegeLevel.parse(r["consequence"]),
                rule_id=r["rule_id"],
            )
            for r in raw_list
        )
        pairs.append((cid, vs))
    return EnrichedGraph(topology=topology, vulns=tuple(sorted(pairs)))
