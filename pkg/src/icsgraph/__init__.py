"""Attack-graph engine for zoned ICS networks."""

from icsgraph.model import ClassifiedVuln, PrivilegeLevel, VulnRecord, join, satisfies
from icsgraph.topology import TopologyGraph, neighbors, parse_blueprint, validate
from icsgraph.vulnerability import (
    EnrichedGraph,
    classify,
    default_rules,
    enrich,
    match_components,
    parse_cvss_vector,
    summarize,
)
from icsgraph.attack_graph import (
    AttackGraph,
    AttackPath,
    ExploitEdge,
    enumerate_paths,
    generate,
    path_stats,
)
from icsgraph.likelihood import (
    EpssTable,
    analyze_all_targets,
    load_epss,
    patch_sensitivity,
    path_probability,
    target_probability,
)
from icsgraph.scenario import ScenarioOverlay, apply, diff, parse_overlay

__version__ = "0.1.0"

__all__ = [
    "AttackGraph",
    "AttackPath",
    "ClassifiedVuln",
    "EnrichedGraph",
    "EpssTable",
    "ExploitEdge",
    "PrivilegeLevel",
    "ScenarioOverlay",
    "TopologyGraph",
    "VulnRecord",
    "analyze_all_targets",
    "apply",
    "classify",
    "default_rules",
    "diff",
    "enrich",
    "enumerate_paths",
    "generate",
    "join",
    "load_epss",
    "match_components",
    "neighbors",
    "parse_blueprint",
    "parse_cvss_vector",
    "parse_overlay",
    "patch_sensitivity",
    "path_probability",
    "path_stats",
    "satisfies",
    "summarize",
    "target_probability",
    "validate",
]
