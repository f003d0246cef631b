"""Flat-file workspace persistence for the analysis service.

Each workspace is a directory of artifact files (uploaded documents stored
verbatim).  Writes are serialized per workspace through an advisory lock;
reads operate on immutable snapshots and need no coordination.
"""

from __future__ import annotations

import json
import uuid
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from filelock import FileLock

from icsgraph.errors import IcsGraphError

TOPOLOGY_FILE = "blueprint.json"
ADVISORIES_FILE = "advisories.json"
ALIASES_FILE = "aliases.json"
EPSS_FILE = "epss.csv"
META_FILE = "meta.json"
SCENARIO_DIR = "scenarios"


class WorkspaceNotFound(IcsGraphError):
    pass


class ArtifactMissing(IcsGraphError):
    pass


@dataclass(frozen=True)
class Workspace:
    id: str
    root: Path

    @property
    def created_at(self) -> str:
        return json.loads((self.root / META_FILE).read_text(encoding="utf-8"))["created_at"]

    def _lock(self) -> FileLock:
        return FileLock(str(self.root / ".lock"))

    def write_artifact(self, filename: str, content: str) -> None:
        with self._lock():
            (self.root / filename).write_text(content, encoding="utf-8")

    def read_artifact(self, filename: str) -> str:
        path = self.root / filename
        if not path.exists():
            raise ArtifactMissing(f"workspace {self.id} has no {filename}")
        return path.read_text(encoding="utf-8")

    def has_artifact(self, filename: str) -> bool:
        return (self.root / filename).exists()

    def add_scenario(self, content: str) -> str:
        scenario_id = uuid.uuid4().hex[:12]
        with self._lock():
            directory = self.root / SCENARIO_DIR
            directory.mkdir(exist_ok=True)
            (directory / f"{scenario_id}.json").write_text(content, encoding="utf-8")
        return scenario_id

    def read_scenario(self, scenario_id: str) -> str:
        path = self.root / SCENARIO_DIR / f"{scenario_id}.json"
        if not path.exists():
            raise ArtifactMissing(f"workspace {self.id} has no scenario {scenario_id}")
        return path.read_text(encoding="utf-8")


class WorkspaceStore:
    def __init__(self, data_dir: Path):
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)

    def create(self) -> Workspace:
        workspace_id = uuid.uuid4().hex[:12]
        root = self.data_dir / workspace_id
        root.mkdir()
        meta = {"id": workspace_id, "created_at": datetime.now(timezone.utc).isoformat()}
        (root / META_FILE).write_text(json.dumps(meta, indent=2) + "\n", encoding="utf-8")
        return Workspace(id=workspace_id, root=root)

    def get(self, workspace_id: str) -> Workspace:
        root = self.data_dir / workspace_id
        if not (root / META_FILE).exists():
            raise WorkspaceNotFound(f"no workspace {workspace_id}")
        return Workspace(id=workspace_id, root=root)
