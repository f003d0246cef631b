"""Exploitation-likelihood estimation over enumerated attack paths.

A single path is a series system: its success probability is the product of
the EPSS scores of every exploit along it.  The set of all paths to a target
is a parallel system: the target's compromise probability is one minus the
probability that every path fails.  Paths are treated as independent even
when they share a CVE; that is the model, not an approximation we correct.
"""

from __future__ import annotations

import csv
import io
import json
import math
import re
import time
from dataclasses import dataclass
from functools import lru_cache

from icsgraph.errors import MalformedCsv, MissingScore, ScoreOutOfRange, UnknownCve
from icsgraph.attack_graph import AttackPath, DEFAULT_MAX_LEN, PathStats, enumerate_paths, path_stats
from icsgraph.vulnerability import EnrichedGraph

# Paths longer than this are multiplied in log-space to dodge underflow.
_LOG_SPACE_THRESHOLD = 16

_SNAPSHOT_RE = re.compile(r"score_date[:=]\s*(\d{4}-\d{2}-\d{2})")


@dataclass(frozen=True)
class EpssTable:
    """CVE id -> exploitation probability, stamped with the snapshot date."""

    scores: tuple[tuple[str, float], ...]
    snapshot_date: str | None

    def score(self, cve_id: str, context: str = "") -> float:
        mapping = _score_map(self)
        if cve_id not in mapping:
            raise MissingScore(cve_id, context)
        return mapping[cve_id]

    def has(self, cve_id: str) -> bool:
        return cve_id in _score_map(self)


@lru_cache(maxsize=128)
def _score_map(table: EpssTable) -> dict[str, float]:
    return dict(table.scores)


def load_epss(text: str) -> EpssTable:
    """Parse an EPSS snapshot CSV (``cve,epss,percentile`` header).

    A leading ``#`` comment line may carry the snapshot date
    (``score_date:YYYY-MM-DD...``), matching the public distribution format.
    Unknown extra columns are ignored.
    """
    snapshot_date = None
    lines = text.splitlines()
    while lines and lines[0].startswith("#"):
        match = _SNAPSHOT_RE.search(lines[0])
        if match:
            snapshot_date = match.group(1)
        lines.pop(0)
    if not lines:
        raise MalformedCsv("EPSS document has no header row")
    reader = csv.DictReader(io.StringIO("\n".join(lines)))
    if reader.fieldnames is None or "cve" not in reader.fieldnames or "epss" not in reader.fieldnames:
        raise MalformedCsv("EPSS header must contain 'cve' and 'epss' columns")
    scores: dict[str, float] = {}
    for row in reader:
        cve = (row.get("cve") or "").strip()
        raw = (row.get("epss") or "").strip()
        if not cve:
            continue
        try:
            value = float(raw)
        except ValueError as exc:
            raise MalformedCsv(f"bad EPSS value {raw!r} for {cve}") from exc
        if not 0.0 <= value <= 1.0:
            raise ScoreOutOfRange(f"EPSS score {value} for {cve} outside [0, 1]")
        scores[cve] = value
    return EpssTable(scores=tuple(sorted(scores.items())), snapshot_date=snapshot_date)


@dataclass(frozen=True)
class PathProbability:
    path: AttackPath
    probability: float


def path_probability(path: AttackPath, epss: EpssTable) -> PathProbability:
    """Product of per-exploit EPSS scores; repeated CVEs count once per occurrence."""
    factors = [epss.score(cve) for cve in path.exploit_sequence]
    if len(factors) > _LOG_SPACE_THRESHOLD:
        if any(f == 0.0 for f in factors):
            value = 0.0
        else:
            value = math.exp(sum(math.log(f) for f in factors))
    else:
        value = 1.0
        for f in factors:
            value *= f
    return PathProbability(path=path, probability=value)


def target_probability(paths: list[PathProbability]) -> float:
    """One minus the probability that every path fails; 0 with no paths."""
    failure = 1.0
    for p in paths:
        failure *= 1.0 - p.probability
    return 1.0 - failure


@dataclass(frozen=True)
class TargetReport:
    """One row of the per-target likelihood table."""

    target_id: str
    p_target: float
    path_count: int
    mean_len: float | None
    median_len: float | None
    max_len: int | None

    @classmethod
    def build(cls, target_id: str, p: float, stats: PathStats) -> "TargetReport":
        return cls(
            target_id=target_id,
            p_target=p,
            path_count=stats.count,
            mean_len=stats.mean_len,
            median_len=stats.median_len,
            max_len=stats.max_len,
        )


def collect_paths(enriched: EnrichedGraph, target_id: str, max_len: int = DEFAULT_MAX_LEN) -> list[AttackPath]:
    """Union of feasible paths to ``target_id`` from every other device."""
    seen: set[AttackPath] = set()
    for source_id in enriched.topology.component_ids():
        if source_id == target_id:
            continue
        seen.update(enumerate_paths(enriched, source_id, target_id, max_len=max_len))
    return sorted(seen, key=lambda p: (p.length, p.node_sequence, p.exploit_sequence))


def target_report(enriched: EnrichedGraph, epss: EpssTable, target_id: str, max_len: int = DEFAULT_MAX_LEN) -> TargetReport:
    paths = collect_paths(enriched, target_id, max_len=max_len)
    try:
        probabilities = [path_probability(p, epss) for p in paths]
    except MissingScore as exc:
        raise MissingScore(exc.cve_id, f"while analyzing target {target_id}") from exc
    return TargetReport.build(target_id, target_probability(probabilities), path_stats(paths))


def analyze_all_targets(
    enriched: EnrichedGraph,
    epss: EpssTable,
    max_len: int = DEFAULT_MAX_LEN,
    deadline_seconds: float | None = None,
) -> tuple[list[TargetReport], bool]:
    """Per-target likelihood over all sources, sorted by probability descending.

    Returns (reports, partial); ``partial`` is True when the deadline cut the
    sweep short, in which case only the targets analyzed so far are present.
    """
    started = time.monotonic()
    reports = []
    partial = False
    for target_id in enriched.topology.component_ids():
        if deadline_seconds is not None and time.monotonic() - started > deadline_seconds:
            partial = True
            break
        reports.append(target_report(enriched, epss, target_id, max_len=max_len))
    reports.sort(key=lambda r: (-r.p_target, r.target_id))
    return reports, partial


def patch_sensitivity(
    enriched: EnrichedGraph, epss: EpssTable, cve_id: str, max_len: int = DEFAULT_MAX_LEN
) -> dict[str, tuple[float, float]]:
    """p_target before and after removing ``cve_id`` from every component."""
    from icsgraph.scenario import PatchCve, ScenarioOverlay, apply  # deferred: scenario imports this module

    if cve_id not in enriched.all_cve_ids():
        raise UnknownCve(f"{cve_id} is not attached to any component")
    patched = apply(enriched, ScenarioOverlay(name=f"patch {cve_id}", actions=(PatchCve(cve_id=cve_id, scope="ALL"),)))
    before, _ = analyze_all_targets(enriched, epss, max_len=max_len)
    after, _ = analyze_all_targets(patched, epss, max_len=max_len)
    after_by_id = {r.target_id: r.p_target for r in after}
    return {r.target_id: (r.p_target, after_by_id[r.target_id]) for r in before}


def reports_to_json(reports: list[TargetReport], snapshot_date: str | None, partial: bool) -> str:
    """Canonical JSON form of the report table, used verbatim by the API."""
    doc = {
        "snapshot_date": snapshot_date,
        "partial": partial,
        "reports": [
            {
                "target": r.target_id,
                "p_target": float(f"{r.p_target:.6f}"),
                "paths": r.path_count,
                "mean_len": r.mean_len,
                "median_len": r.median_len,
                "max_len": r.max_len,
            }
            for r in reports
        ],
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def reports_to_csv(reports: list[TargetReport], snapshot_date: str | None = None) -> str:
    """Render the report table: 6-decimal probabilities, 2-decimal length stats.

    The EPSS snapshot date rides along as a leading comment line, mirroring
    the public EPSS distribution format.
    """
    out = io.StringIO()
    if snapshot_date:
        out.write(f"#epss_snapshot:{snapshot_date}\n")
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["target", "p_target", "paths", "mean_len", "median_len", "max_len"])
    for r in reports:
        writer.writerow(
            [
                r.target_id,
                f"{r.p_target:.6f}",
                r.path_count,
                "" if r.mean_len is None else f"{r.mean_len:.2f}",
                "" if r.median_len is None else f"{r.median_len:.2f}",
                "" if r.max_len is None else r.max_len,
            ]
        )
    return out.getvalue()
