"""Overlay application, purity, diffing, and the case-study behaviors."""

import json
import random

import pytest

from icsgraph.attack_graph import generate
from icsgraph.errors import SchemaViolation, UnknownComponent, UnknownCve, UnknownLink
from icsgraph.model import PrivilegeLevel, VulnRecord
from icsgraph.scenario import (
    AddVuln,
    BlockLink,
    PatchCve,
    ScenarioOverlay,
    SetStart,
    UnblockLink,
    apply,
    diff,
    overlay_to_json,
    parse_overlay,
)
from icsgraph.vulnerability import enriched_to_json

from tests.conftest import make_enriched, make_vuln, random_enriched

P = PrivilegeLevel


def artificial(cve_id="XVE-TEST-1"):
    return VulnRecord(
        cve_id=cve_id, cvss_vector=None, description="synthetic weakness", source_advisory="scenario:test", artificial=True
    )


def test_empty_overlay_is_identity(case_study_enriched):
    result = apply(case_study_enriched, ScenarioOverlay(name="noop"))
    assert enriched_to_json(result) == enriched_to_json(case_study_enriched)


def test_apply_is_pure(case_study_enriched, backfw_overlay):
    before = enriched_to_json(case_study_enriched)
    apply(case_study_enriched, backfw_overlay)
    assert enriched_to_json(case_study_enriched) == before


def test_patch_front_firewall_breaks_chain(case_study_enriched, patch_ff_overlay):
    patched = apply(case_study_enriched, patch_ff_overlay)
    graph = generate(patched, "Enterprise Workstation", P.OS_ADMIN)
    assert graph.nodes == ("Enterprise Workstation",)
    assert graph.edges == ()


def test_backfw_misconfig_reaches_building(case_study_enriched, backfw_overlay):
    variant = apply(case_study_enriched, backfw_overlay)
    graph = generate(variant, "PCS 7 Web Server", P.OS_ADMIN)
    zones = {variant.topology.zone_of(n) for n in graph.nodes}
    assert "building" in zones
    assert "central-plant" not in zones
    assert any(n.startswith("S7-1512") for n in graph.nodes)


def test_xf204_weakness_reaches_central_plant(case_study_enriched, backfw_xf204_overlay):
    variant = apply(case_study_enriched, backfw_xf204_overlay)
    graph = generate(variant, "PCS 7 Web Server", P.OS_ADMIN)
    zones = {variant.topology.zone_of(n) for n in graph.nodes}
    assert {"building", "central-plant"} <= zones


def test_add_vuln_requires_artificial_record():
    with pytest.raises(SchemaViolation):
        AddVuln(
            component_id="a",
            record=VulnRecord(cve_id="CVE-2024-1", cvss_vector=None, description="", source_advisory="x"),
            precondition=P.NONE,
            consequence=P.OS_ADMIN,
        )


def test_add_vuln_unknown_component(case_study_enriched):
    overlay = ScenarioOverlay(
        name="bad",
        actions=(AddVuln(component_id="ghost", record=artificial(), precondition=P.NONE, consequence=P.OS_ADMIN),),
    )
    with pytest.raises(UnknownComponent) as exc:
        apply(case_study_enriched, overlay)
    assert "action 0" in str(exc.value)


def test_patch_unknown_cve(case_study_enriched):
    overlay = ScenarioOverlay(name="bad", actions=(PatchCve(cve_id="CVE-1999-0001"),))
    with pytest.raises(UnknownCve) as exc:
        apply(case_study_enriched, overlay)
    assert "action 0" in str(exc.value)


def test_patch_scoped_to_component():
    enriched = make_enriched(
        {
            "a": [],
            "b": [make_vuln("CVE-2024-0001", P.NONE, P.OS_ADMIN)],
            "c": [make_vuln("CVE-2024-0001", P.NONE, P.OS_ADMIN)],
        },
        [("a", "b"), ("a", "c")],
    )
    patched = apply(enriched, ScenarioOverlay(name="s", actions=(PatchCve(cve_id="CVE-2024-0001", scope="b"),)))
    assert patched.vulns_for("b") == ()
    assert len(patched.vulns_for("c")) == 1


def test_block_link_removes_both_directions(case_study_enriched):
    overlay = ScenarioOverlay(name="b", actions=(BlockLink(from_id="SCALANCE M826-2", to_id="S7-1512-1"),))
    variant = apply(case_study_enriched, overlay)
    assert ("SCALANCE M826-2", "S7-1512-1") not in variant.topology.edges
    assert ("S7-1512-1", "SCALANCE M826-2") not in variant.topology.edges


def test_block_unknown_link(case_study_enriched):
    overlay = ScenarioOverlay(name="b", actions=(BlockLink(from_id="S7-1510", to_id="Front Firewall"),))
    with pytest.raises(UnknownLink):
        apply(case_study_enriched, overlay)


def test_unblock_creates_link(case_study_enriched):
    overlay = ScenarioOverlay(name="u", actions=(UnblockLink(from_id="PCS 7 Web Server", to_id="SCALANCE M826-2"),))
    variant = apply(case_study_enriched, overlay)
    assert ("PCS 7 Web Server", "SCALANCE M826-2") in variant.topology.edges
    assert ("SCALANCE M826-2", "PCS 7 Web Server") in variant.topology.edges


def test_unblock_unknown_node(case_study_enriched):
    overlay = ScenarioOverlay(name="u", actions=(UnblockLink(from_id="ghost", to_id="S7-1510"),))
    with pytest.raises(UnknownComponent):
        apply(case_study_enriched, overlay)


def test_set_start_resolution(case_study_enriched):
    overlay = ScenarioOverlay(name="s", actions=(SetStart(node_id="PCS 7 Web Server", privilege=P.OS_USER),))
    apply(case_study_enriched, overlay)  # validates the node exists
    assert overlay.resolved_start("x", P.NONE) == ("PCS 7 Web Server", P.OS_USER)
    assert ScenarioOverlay(name="n").resolved_start("x", P.NONE) == ("x", P.NONE)


def test_overlay_composition(case_study_enriched, backfw_overlay, patch_ff_overlay):
    combined = ScenarioOverlay(name="both", actions=backfw_overlay.actions + patch_ff_overlay.actions)
    sequential = apply(apply(case_study_enriched, backfw_overlay), patch_ff_overlay)
    at_once = apply(case_study_enriched, combined)
    assert enriched_to_json(sequential) == enriched_to_json(at_once)


def test_overlay_json_round_trip(backfw_xf204_overlay):
    text = overlay_to_json(backfw_xf204_overlay)
    assert parse_overlay(text) == backfw_xf204_overlay


def test_parse_overlay_rejects_unknown_op():
    with pytest.raises(SchemaViolation):
        parse_overlay(json.dumps({"name": "x", "actions": [{"op": "explode"}]}))


def test_parse_overlay_reports_action_index():
    doc = {"name": "x", "actions": [{"op": "patch_cve"}]}
    with pytest.raises(SchemaViolation) as exc:
        parse_overlay(json.dumps(doc))
    assert "action 0" in str(exc.value)


# ---------------------------------------------------------------------------
# Diff
# ---------------------------------------------------------------------------


def test_identical_graphs_empty_diff(case_study_enriched, epss_table):
    result = diff(case_study_enriched, case_study_enriched, "PCS 7 Web Server", P.OS_ADMIN, epss_table)
    assert result.edges_added == ()
    assert result.edges_removed == ()
    assert result.newly_reachable_zones == ()
    assert all(before == after for _, before, after in result.targets_delta)


def test_case_study_diff_zones(case_study_enriched, epss_table, backfw_overlay, backfw_xf204_overlay):
    variant = apply(case_study_enriched, backfw_overlay)
    result = diff(case_study_enriched, variant, "PCS 7 Web Server", P.OS_ADMIN, epss_table)
    assert result.newly_reachable_zones == ("building",)

    variant2 = apply(case_study_enriched, backfw_xf204_overlay)
    result2 = diff(case_study_enriched, variant2, "PCS 7 Web Server", P.OS_ADMIN, epss_table)
    assert result2.newly_reachable_zones == ("building", "central-plant")


def test_patch_diff_is_antimonotone(case_study_enriched, epss_table, patch_ff_overlay):
    variant = apply(case_study_enriched, patch_ff_overlay)
    result = diff(case_study_enriched, variant, "Enterprise Workstation", P.OS_ADMIN, epss_table)
    assert result.edges_added == ()
    assert len(result.edges_removed) > 0
    for _, before, after in result.targets_delta:
        assert after <= before + 1e-15


def test_misconfiguration_never_removes_edges(case_study_enriched, epss_table, backfw_overlay):
    variant = apply(case_study_enriched, backfw_overlay)
    result = diff(case_study_enriched, variant, "PCS 7 Web Server", P.OS_ADMIN, epss_table)
    assert result.edges_removed == ()
    assert len(result.edges_added) > 0
    for _, before, after in result.targets_delta:
        assert after >= before - 1e-15


def test_addvuln_monotone_random():
    rng = random.Random(909)
    from icsgraph.likelihood import EpssTable

    for _ in range(10):
        enriched = random_enriched(rng, max_nodes=5, max_vulns=2)
        ids = enriched.topology.component_ids()
        component = rng.choice(ids)
        overlay = ScenarioOverlay(
            name="mis",
            actions=(
                AddVuln(
                    component_id=component,
                    record=artificial("XVE-RAND-1"),
                    precondition=P.NONE,
                    consequence=P.OS_ADMIN,
                ),
            ),
        )
        variant = apply(enriched, overlay)
        scores = {cve: rng.random() for cve in enriched.all_cve_ids() | {"XVE-RAND-1"}}
        epss = EpssTable(scores=tuple(sorted(scores.items())), snapshot_date=None)
        start = rng.choice(ids)
        result = diff(enriched, variant, start, P.OS_ADMIN, epss, max_len=5)
        assert result.edges_removed == ()
        for _, before, after in result.targets_delta:
            assert after >= before - 1e-12
