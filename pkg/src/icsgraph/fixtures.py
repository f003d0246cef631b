"""Accessors for the fixture corpus shipped with the package.

The corpus covers the PCS7 golden graph, the two path-structure fixtures,
and the four-zone case-study blueprint with its what-if overlays, plus one
synthetic advisory database and a pinned EPSS snapshot shared by all of
them.
"""

from __future__ import annotations

from importlib import resources

from icsgraph.likelihood import EpssTable, load_epss
from icsgraph.scenario import ScenarioOverlay, parse_overlay
from icsgraph.topology import TopologyGraph, parse_blueprint
from icsgraph.vulnerability import (
    AdvisoryDb,
    AliasTable,
    EnrichedGraph,
    default_rules,
    enrich,
    load_advisories,
    load_aliases,
    match_components,
)

BLUEPRINTS = {
    "pcs7_fig2": "pcs7_fixture.json",
    "fig3": "fig3_blueprint.json",
    "fig4": "fig4_blueprint.json",
    "case_study": "case_study_blueprint.json",
}

ALIASES = {
    "pcs7_fig2": "pcs7_fixture_aliases.json",
    "fig3": "fig3_aliases.json",
    "fig4": "fig4_aliases.json",
    "case_study": "case_study_aliases.json",
}

OVERLAYS = {
    "backfw_misconfig": "overlay_backfw_misconfig.json",
    "backfw_xf204": "overlay_backfw_xf204.json",
    "patch_front_firewall": "overlay_patch_front_firewall.json",
}


def fixture_text(filename: str) -> str:
    return resources.files("icsgraph").joinpath("data", "fixtures", filename).read_text(encoding="utf-8")


def load_fixture_topology(name: str) -> TopologyGraph:
    return parse_blueprint(fixture_text(BLUEPRINTS[name]))


def load_fixture_advisories() -> AdvisoryDb:
    return load_advisories(fixture_text("ssa.json"))


def load_fixture_aliases(name: str) -> AliasTable:
    return load_aliases(fixture_text(ALIASES[name]))


def load_fixture_epss() -> EpssTable:
    return load_epss(fixture_text("epss_snapshot.csv"))


def load_fixture_overlay(name: str) -> ScenarioOverlay:
    return parse_overlay(fixture_text(OVERLAYS[name]))


def load_fixture_enriched(name: str) -> EnrichedGraph:
    """Full enrichment pipeline over one fixture blueprint."""
    topology = load_fixture_topology(name)
    matches = match_components(topology, load_fixture_aliases(name), load_fixture_advisories())
    return enrich(topology, matches, default_rules())
