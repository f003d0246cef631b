"""Shared fixtures: shipped corpus loaders and a random enriched-graph generator."""

from __future__ import annotations

import random

import pytest

from icsgraph.fixtures import (
    load_fixture_advisories,
    load_fixture_aliases,
    load_fixture_enriched,
    load_fixture_epss,
    load_fixture_overlay,
    load_fixture_topology,
)
from icsgraph.model import ClassifiedVuln, FALLBACK, PrivilegeLevel, VulnRecord
from icsgraph.topology import Bus, Component, ComponentKind, TopologyGraph, Zone
from icsgraph.vulnerability import EnrichedGraph

P = PrivilegeLevel

REMOTE_VECTOR = "CVSS:3.1/AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:H"
LOCAL_VECTOR = "CVSS:3.1/AV:L/AC:L/PR:L/UI:N/S:U/C:H/I:H/A:H"


@pytest.fixture(scope="session")
def pcs7_enriched():
    return load_fixture_enriched("pcs7_fig2")


@pytest.fixture(scope="session")
def fig3_enriched():
    return load_fixture_enriched("fig3")


@pytest.fixture(scope="session")
def fig4_enriched():
    return load_fixture_enriched("fig4")


@pytest.fixture(scope="session")
def case_study_enriched():
    return load_fixture_enriched("case_study")


@pytest.fixture(scope="session")
def epss_table():
    return load_fixture_epss()


@pytest.fixture(scope="session")
def pcs7_topology():
    return load_fixture_topology("pcs7_fig2")


@pytest.fixture(scope="session")
def advisory_db():
    return load_fixture_advisories()


@pytest.fixture(scope="session")
def pcs7_aliases():
    return load_fixture_aliases("pcs7_fig2")


@pytest.fixture(scope="session")
def backfw_overlay():
    return load_fixture_overlay("backfw_misconfig")


@pytest.fixture(scope="session")
def backfw_xf204_overlay():
    return load_fixture_overlay("backfw_xf204")


@pytest.fixture(scope="session")
def patch_ff_overlay():
    return load_fixture_overlay("patch_front_firewall")


def make_vuln(
    cve_id: str,
    precondition: PrivilegeLevel,
    consequence: PrivilegeLevel,
    remote: bool = True,
    rule_id: str = "synthetic",
) -> ClassifiedVuln:
    """Construct a classified vulnerability directly, bypassing the rule engine."""
    if rule_id == FALLBACK:
        precondition, consequence = P.OS_ADMIN, P.NONE
    return ClassifiedVuln(
        record=VulnRecord(
            cve_id=cve_id,
            cvss_vector=REMOTE_VECTOR if remote else LOCAL_VECTOR,
            description="synthetic test record",
            source_advisory="SSA-TEST",
        ),
        precondition=precondition,
        consequence=consequence,
        rule_id=rule_id,
    )


def make_enriched(
    node_vulns: dict[str, list[ClassifiedVuln]],
    links: list[tuple[str, str]],
    directed: bool = False,
    buses: list[str] | None = None,
    zones: dict[str, str] | None = None,
) -> EnrichedGraph:
    """Small-graph builder for unit tests; one zone unless told otherwise."""
    zones = zones or {}
    zone_ids = sorted(set(zones.values()) | {"z0"})
    bus_ids = buses or []
    components = tuple(
        Component(id=nid, display_name=nid, kind=ComponentKind.OTHER, zone_id=zones.get(nid, "z0"))
        for nid in sorted(node_vulns)
    )
    edges: set[tuple[str, str]] = set()
    for a, b in links:
        edges.add((a, b))
        if not directed:
            edges.add((b, a))
    topology = TopologyGraph(
        components=components,
        buses=tuple(Bus(id=b, zone_id=zones.get(b, "z0")) for b in sorted(bus_ids)),
        zones=tuple(Zone(id=z, name=z) for z in zone_ids),
        edges=tuple(sorted(edges)),
    )
    vulns = tuple((nid, tuple(sorted(node_vulns[nid], key=lambda v: v.cve_id))) for nid in sorted(node_vulns))
    return EnrichedGraph(topology=topology, vulns=vulns)


_PRECONDITIONS = [P.NONE, P.NONE, P.OS_USER, P.OS_USER, P.OS_ADMIN, P.APP_USER, P.APP_ADMIN]
_CONSEQUENCES = [P.NONE, P.OS_USER, P.OS_USER, P.OS_ADMIN, P.OS_ADMIN]


def random_enriched(rng: random.Random, max_nodes: int = 8, max_vulns: int = 4) -> EnrichedGraph:
    """Random small enriched graph: mixed link directions, exploit classes, fallbacks."""
    n = rng.randint(2, max_nodes)
    names = [f"n{i:02d}" for i in range(n)]
    node_vulns: dict[str, list[ClassifiedVuln]] = {}
    serial = 1000
    for name in names:
        vulns = []
        for _ in range(rng.randint(0, max_vulns)):
            serial += 1
            if rng.random() < 0.1:
                vulns.append(make_vuln(f"CVE-2024-{serial}", P.OS_ADMIN, P.NONE, rule_id=FALLBACK))
            else:
                vulns.append(
                    make_vuln(
                        f"CVE-2024-{serial}",
                        rng.choice(_PRECONDITIONS),
                        rng.choice(_CONSEQUENCES),
                        remote=rng.random() < 0.7,
                    )
                )
        node_vulns[name] = vulns
    links = []
    directed_edges: set[tuple[str, str]] = set()
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < 0.45:
                if rng.random() < 0.25:
                    directed_edges.add((names[i], names[j]))
                else:
                    links.append((names[i], names[j]))
    enriched = make_enriched(node_vulns, links)
    if directed_edges:
        topology = enriched.topology
        enriched = EnrichedGraph(
            topology=TopologyGraph(
                components=topology.components,
                buses=topology.buses,
                zones=topology.zones,
                edges=tuple(sorted(set(topology.edges) | directed_edges)),
            ),
            vulns=enriched.vulns,
        )
    return enriched


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One pass/fail line per acceptance criterion at the end of the run."""
    lines = []
    for status in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(status, []):
            if "test_acceptance" in report.nodeid:
                name = report.nodeid.split("::")[-1]
                verdict = "PASS" if status == "passed" else "FAIL"
                lines.append((name, verdict))
    if lines:
        terminalreporter.write_sep("-", "acceptance criteria")
        for name, verdict in sorted(lines):
            terminalreporter.write_line(f"{verdict}  {name}")
