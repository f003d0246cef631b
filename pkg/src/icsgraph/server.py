"""HTTP API exposing the full pipeline to the analyst UI.

Every handler is a thin shell: parse the request, call the library, return
the library's own serialized output.  State lives in flat workspace files;
nothing is computed ahead of time or memoized between requests.
"""

from __future__ import annotations

import json
from pathlib import Path

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from icsgraph.attack_graph import attack_graph_to_json, generate
from icsgraph.errors import IcsGraphError
from icsgraph.likelihood import analyze_all_targets, load_epss, reports_to_csv, reports_to_json
from icsgraph.model import PrivilegeLevel
from icsgraph.scenario import apply, diff, diff_to_json, overlay_to_json, parse_overlay
from icsgraph.topology import parse_blueprint, serialize_graph
from icsgraph.vulnerability import (
    default_rules,
    enrich,
    enriched_to_json,
    load_advisories,
    load_aliases,
    match_components,
)
from icsgraph.workspace import (
    ADVISORIES_FILE,
    ALIASES_FILE,
    EPSS_FILE,
    TOPOLOGY_FILE,
    ArtifactMissing,
    Workspace,
    WorkspaceNotFound,
    WorkspaceStore,
)

DEFAULT_ANALYZE_DEADLINE = 60.0


def _json_response(payload: str, status_code: int = 200) -> Response:
    return Response(content=payload, media_type="application/json", status_code=status_code)


def _enriched_of(workspace: Workspace):
    topology = parse_blueprint(workspace.read_artifact(TOPOLOGY_FILE))
    advisories = load_advisories(workspace.read_artifact(ADVISORIES_FILE))
    aliases = load_aliases(workspace.read_artifact(ALIASES_FILE))
    return enrich(topology, match_components(topology, aliases, advisories), default_rules())


def create_app(
    data_dir: Path,
    static_dir: Path | None = None,
    analyze_deadline: float = DEFAULT_ANALYZE_DEADLINE,
) -> FastAPI:
    app = FastAPI(title="icsgraph", docs_url=None, redoc_url=None)
    store = WorkspaceStore(Path(data_dir))

    @app.exception_handler(WorkspaceNotFound)
    @app.exception_handler(ArtifactMissing)
    async def _not_found(_request: Request, exc: IcsGraphError) -> JSONResponse:
        return JSONResponse(status_code=404, content={"error": str(exc)})

    @app.exception_handler(IcsGraphError)
    async def _bad_input(_request: Request, exc: IcsGraphError) -> JSONResponse:
        return JSONResponse(status_code=400, content={"error": str(exc)})

    @app.post("/api/v1/workspaces")
    async def create_workspace() -> dict:
        workspace = store.create()
        return {"id": workspace.id}

    @app.post("/api/v1/workspaces/{workspace_id}/topology")
    async def upload_topology(workspace_id: str, request: Request) -> dict:
        workspace = store.get(workspace_id)
        text = (await request.body()).decode("utf-8")
        parse_blueprint(text)  # reject bad documents before persisting
        workspace.write_artifact(TOPOLOGY_FILE, text)
        return {"stored": TOPOLOGY_FILE}

    @app.post("/api/v1/workspaces/{workspace_id}/advisories")
    async def upload_advisories(workspace_id: str, request: Request) -> dict:
        workspace = store.get(workspace_id)
        text = (await request.body()).decode("utf-8")
        load_advisories(text)
        workspace.write_artifact(ADVISORIES_FILE, text)
        return {"stored": ADVISORIES_FILE}

    @app.post("/api/v1/workspaces/{workspace_id}/aliases")
    async def upload_aliases(workspace_id: str, request: Request) -> dict:
        workspace = store.get(workspace_id)
        text = (await request.body()).decode("utf-8")
        load_aliases(text)
        workspace.write_artifact(ALIASES_FILE, text)
        return {"stored": ALIASES_FILE}

    @app.post("/api/v1/workspaces/{workspace_id}/epss")
    async def upload_epss(workspace_id: str, request: Request) -> dict:
        workspace = store.get(workspace_id)
        text = (await request.body()).decode("utf-8")
        load_epss(text)
        workspace.write_artifact(EPSS_FILE, text)
        return {"stored": EPSS_FILE}

    @app.get("/api/v1/workspaces/{workspace_id}/graph")
    async def get_graph(workspace_id: str) -> Response:
        workspace = store.get(workspace_id)
        graph = parse_blueprint(workspace.read_artifact(TOPOLOGY_FILE))
        return _json_response(serialize_graph(graph))

    @app.get("/api/v1/workspaces/{workspace_id}/enriched")
    async def get_enriched(workspace_id: str) -> Response:
        workspace = store.get(workspace_id)
        return _json_response(enriched_to_json(_enriched_of(workspace)))

    @app.get("/api/v1/workspaces/{workspace_id}/attack-graph")
    async def get_attack_graph(
        workspace_id: str, start: str, privilege: str = "OS(ADMIN)", scenario: str | None = None
    ) -> Response:
        workspace = store.get(workspace_id)
        enriched = _enriched_of(workspace)
        start_id, initial = start, PrivilegeLevel.parse(privilege)
        if scenario is not None:
            overlay = parse_overlay(workspace.read_scenario(scenario))
            enriched = apply(enriched, overlay)
            start_id, initial = overlay.resolved_start(start_id, initial)
        graph = generate(enriched, start_id, initial)
        return _json_response(attack_graph_to_json(graph))

    @app.get("/api/v1/workspaces/{workspace_id}/likelihood")
    async def get_likelihood(
        workspace_id: str, max_len: int = 8, format: str = "json", scenario: str | None = None
    ) -> Response:
        workspace = store.get(workspace_id)
        epss = load_epss(workspace.read_artifact(EPSS_FILE))
        enriched = _enriched_of(workspace)
        if scenario is not None:
            enriched = apply(enriched, parse_overlay(workspace.read_scenario(scenario)))
        reports, partial = analyze_all_targets(enriched, epss, max_len=max_len, deadline_seconds=analyze_deadline)
        if format == "csv":
            return Response(content=reports_to_csv(reports, snapshot_date=epss.snapshot_date), media_type="text/csv")
        return _json_response(reports_to_json(reports, epss.snapshot_date, partial))

    @app.post("/api/v1/workspaces/{workspace_id}/scenarios")
    async def create_scenario(workspace_id: str, request: Request) -> dict:
        workspace = store.get(workspace_id)
        overlay = parse_overlay((await request.body()).decode("utf-8"))
        scenario_id = workspace.add_scenario(overlay_to_json(overlay))
        return {"id": scenario_id}

    @app.get("/api/v1/workspaces/{workspace_id}/scenarios/{scenario_id}/diff")
    async def get_scenario_diff(
        workspace_id: str, scenario_id: str, start: str, privilege: str = "OS(ADMIN)", max_len: int = 8
    ) -> Response:
        workspace = store.get(workspace_id)
        overlay = parse_overlay(workspace.read_scenario(scenario_id))
        base = _enriched_of(workspace)
        variant = apply(base, overlay)
        epss = load_epss(workspace.read_artifact(EPSS_FILE))
        start_id, initial = overlay.resolved_start(start, PrivilegeLevel.parse(privilege))
        result = diff(base, variant, start_id, initial, epss, max_len=max_len)
        return _json_response(diff_to_json(result, overlay.name))

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")

    return app
