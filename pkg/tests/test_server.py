"""HTTP API surface: artifact round-trips and CLI/API consistency."""

import json

import pytest
from fastapi.testclient import TestClient

from icsgraph.cli import main
from icsgraph.fixtures import fixture_text
from icsgraph.server import create_app

API = "/api/v1"


@pytest.fixture
def client(tmp_path):
    app = create_app(tmp_path / "data")
    with TestClient(app) as c:
        yield c


@pytest.fixture
def workspace(client):
    response = client.post(f"{API}/workspaces")
    assert response.status_code == 200
    return response.json()["id"]


def upload_fixture_set(client, workspace, blueprint, aliases):
    for endpoint, filename in [
        ("topology", blueprint),
        ("advisories", "ssa.json"),
        ("aliases", aliases),
        ("epss", "epss_snapshot.csv"),
    ]:
        response = client.post(f"{API}/workspaces/{workspace}/{endpoint}", content=fixture_text(filename))
        assert response.status_code == 200, response.text


def test_topology_round_trip(client, workspace):
    client.post(f"{API}/workspaces/{workspace}/topology", content=fixture_text("pcs7_fixture.json"))
    response = client.get(f"{API}/workspaces/{workspace}/graph")
    assert response.status_code == 200
    doc = response.json()
    assert len(doc["components"]) == 6
    assert len(doc["zones"]) == 4


def test_invalid_topology_rejected(client, workspace):
    response = client.post(f"{API}/workspaces/{workspace}/topology", content="{broken")
    assert response.status_code == 400
    assert "error" in response.json()


def test_unknown_workspace_404(client):
    assert client.get(f"{API}/workspaces/nope/graph").status_code == 404


def test_missing_artifact_404(client, workspace):
    assert client.get(f"{API}/workspaces/{workspace}/graph").status_code == 404


def test_enriched_endpoint(client, workspace):
    upload_fixture_set(client, workspace, "pcs7_fixture.json", "pcs7_fixture_aliases.json")
    response = client.get(f"{API}/workspaces/{workspace}/enriched")
    assert response.status_code == 200
    vulns = response.json()["vulns"]
    assert [v["cve_id"] for v in vulns["TIM 1531 IRC"]] == ["CVE-2015-8011"]


def test_attack_graph_endpoint(client, workspace):
    upload_fixture_set(client, workspace, "pcs7_fixture.json", "pcs7_fixture_aliases.json")
    response = client.get(
        f"{API}/workspaces/{workspace}/attack-graph", params={"start": "S7-1200", "privilege": "OS(ADMIN)"}
    )
    assert response.status_code == 200
    doc = response.json()
    assert len(doc["edges"]) == 6
    kinds = {e["kind"] for e in doc["edges"]}
    assert kinds == {"LATERAL", "LOCAL"}


def test_attack_graph_unknown_start(client, workspace):
    upload_fixture_set(client, workspace, "pcs7_fixture.json", "pcs7_fixture_aliases.json")
    response = client.get(f"{API}/workspaces/{workspace}/attack-graph", params={"start": "ghost"})
    assert response.status_code == 400


def test_likelihood_json(client, workspace):
    upload_fixture_set(client, workspace, "fig4_blueprint.json", "fig4_aliases.json")
    response = client.get(f"{API}/workspaces/{workspace}/likelihood")
    assert response.status_code == 200
    doc = response.json()
    assert doc["partial"] is False
    assert doc["snapshot_date"] == "2025-10-27"
    tim = next(r for r in doc["reports"] if r["target"] == "TIM 1531 IRC")
    assert tim["paths"] == 15


def test_likelihood_csv_matches_cli(client, workspace, tmp_path):
    upload_fixture_set(client, workspace, "fig4_blueprint.json", "fig4_aliases.json")
    api_csv = client.get(f"{API}/workspaces/{workspace}/likelihood", params={"format": "csv"}).text

    graph = tmp_path / "graph.json"
    enriched = tmp_path / "enriched.json"
    report = tmp_path / "report.csv"
    blueprint = tmp_path / "blueprint.json"
    blueprint.write_text(fixture_text("fig4_blueprint.json"))
    (tmp_path / "ssa.json").write_text(fixture_text("ssa.json"))
    (tmp_path / "aliases.json").write_text(fixture_text("fig4_aliases.json"))
    (tmp_path / "epss.csv").write_text(fixture_text("epss_snapshot.csv"))
    assert main(["parse", str(blueprint), "--out", str(graph)]) == 0
    assert (
        main(
            [
                "enrich",
                "--topology", str(graph),
                "--advisories", str(tmp_path / "ssa.json"),
                "--aliases", str(tmp_path / "aliases.json"),
                "--out", str(enriched),
            ]
        )
        == 0
    )
    assert main(["analyze", "--enriched", str(enriched), "--epss", str(tmp_path / "epss.csv"), "--out", str(report)]) == 0
    assert api_csv == report.read_text()


def test_scenario_endpoints(client, workspace):
    upload_fixture_set(client, workspace, "case_study_blueprint.json", "case_study_aliases.json")
    response = client.post(
        f"{API}/workspaces/{workspace}/scenarios", content=fixture_text("overlay_backfw_misconfig.json")
    )
    assert response.status_code == 200
    scenario_id = response.json()["id"]

    response = client.get(
        f"{API}/workspaces/{workspace}/scenarios/{scenario_id}/diff",
        params={"start": "PCS 7 Web Server", "privilege": "OS(ADMIN)"},
    )
    assert response.status_code == 200
    doc = response.json()
    assert doc["scenario"] == "back-firewall-misconfiguration"
    assert doc["newly_reachable_zones"] == ["building"]
    assert len(doc["edges_added"]) > 0


def test_attack_graph_reflects_scenario(client, workspace):
    upload_fixture_set(client, workspace, "case_study_blueprint.json", "case_study_aliases.json")
    baseline = client.get(
        f"{API}/workspaces/{workspace}/attack-graph", params={"start": "PCS 7 Web Server"}
    ).json()
    scenario_id = client.post(
        f"{API}/workspaces/{workspace}/scenarios", content=fixture_text("overlay_backfw_misconfig.json")
    ).json()["id"]
    with_overlay = client.get(
        f"{API}/workspaces/{workspace}/attack-graph",
        params={"start": "PCS 7 Web Server", "scenario": scenario_id},
    ).json()
    assert "SCALANCE M826-2" not in baseline["nodes"]
    assert "SCALANCE M826-2" in with_overlay["nodes"]
    assert any(e["cve_id"] == "XVE-MISCONF-BACKFW" for e in with_overlay["edges"])


def test_unknown_scenario_404(client, workspace):
    upload_fixture_set(client, workspace, "case_study_blueprint.json", "case_study_aliases.json")
    response = client.get(
        f"{API}/workspaces/{workspace}/scenarios/nope/diff", params={"start": "PCS 7 Web Server"}
    )
    assert response.status_code == 404


def test_epss_upload_validation(client, workspace):
    response = client.post(f"{API}/workspaces/{workspace}/epss", content="cve,epss,percentile\nCVE-2024-1,2.5,0\n")
    assert response.status_code == 400
