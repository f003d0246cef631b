"""EPSS snapshot ingestion: offline files and a caching remote client.

OFFLINE mode never touches the network.  REMOTE mode fetches the published
CSV (optionally gzip-compressed), writes it into the cache directory, and
serves the cache without a network call while it is younger than
``max_age_seconds``.
"""

from __future__ import annotations

import gzip
import time
import urllib.error
import urllib.request
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from icsgraph.errors import MalformedCsv, SourceUnavailable
from icsgraph.likelihood import EpssTable, load_epss

_CACHE_FILENAME = "epss_cache.csv"


@dataclass(frozen=True)
class OfflineSource:
    path: Path


@dataclass(frozen=True)
class RemoteSource:
    url: str


@dataclass(frozen=True)
class EpssFetchConfig:
    source: OfflineSource | RemoteSource
    cache_dir: Path | None = None
    max_age_seconds: float = 24 * 3600.0


def _default_http_get(url: str) -> bytes:
    with urllib.request.urlopen(url, timeout=30) as response:
        return response.read()


def _decode(payload: bytes) -> str:
    if payload[:2] == b"\x1f\x8b":
        payload = gzip.decompress(payload)
    try:
        return payload.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise MalformedCsv("EPSS payload is not UTF-8 text") from exc


def fetch_epss(config: EpssFetchConfig, http_get: Callable[[str], bytes] | None = None) -> EpssTable:
    """Load an EPSS table per the configured source.

    REMOTE failures fall back to a stale cache when one exists; with neither
    a reachable source nor any cache, SourceUnavailable is raised.
    """
    if isinstance(config.source, OfflineSource):
        path = Path(config.source.path)
        if not path.exists():
            raise SourceUnavailable(f"offline EPSS file not found: {path}")
        return load_epss(path.read_text(encoding="utf-8"))

    cache_file = Path(config.cache_dir) / _CACHE_FILENAME if config.cache_dir else None
    if cache_file is not None and cache_file.exists():
        age = time.time() - cache_file.stat().st_mtime
        if age <= config.max_age_seconds:
            return load_epss(cache_file.read_text(encoding="utf-8"))

    get = http_get or _default_http_get
    try:
        text = _decode(get(config.source.url))
    except (urllib.error.URLError, OSError) as exc:
        if cache_file is not None and cache_file.exists():
            return load_epss(cache_file.read_text(encoding="utf-8"))
        raise SourceUnavailable(f"EPSS source {config.source.url} unreachable and no cache present") from exc

    table = load_epss(text)  # validate before caching
    if cache_file is not None:
        cache_file.parent.mkdir(parents=True, exist_ok=True)
        cache_file.write_text(text, encoding="utf-8")
    return table
