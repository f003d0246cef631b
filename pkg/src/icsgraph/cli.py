"""Command-line entry points for the analysis pipeline.

Exit codes are stable for scripting: 0 success, 2 validation issues found,
3 input error, 4 internal error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from icsgraph.attack_graph import (
    ExportFormat,
    attack_graph_to_json,
    enumerate_paths,
    export,
    generate,
)
from icsgraph.epss_client import EpssFetchConfig, OfflineSource, RemoteSource, fetch_epss
from icsgraph.errors import IcsGraphError
from icsgraph.likelihood import analyze_all_targets, load_epss, reports_to_csv
from icsgraph.model import PrivilegeLevel
from icsgraph.scenario import apply, diff, diff_to_json, parse_overlay
from icsgraph.topology import parse_blueprint, parse_graph_json, serialize_graph, validate
from icsgraph.vulnerability import (
    default_rules,
    enrich,
    enriched_from_json,
    enriched_to_json,
    load_advisories,
    load_aliases,
    load_rules,
    match_components,
)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_INPUT = 3
EXIT_INTERNAL = 4


def _write(path: str | None, content: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(content)
    else:
        Path(path).write_text(content, encoding="utf-8")


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def cmd_parse(args: argparse.Namespace) -> int:
    graph = parse_blueprint(_read(args.blueprint))
    if args.out:
        _write(args.out, serialize_graph(graph))
    if args.validate:
        issues = validate(graph)
        for issue in issues:
            print(f"{issue.severity} {issue.code} {issue.subject_id}: {issue.message}", file=sys.stderr)
        if issues:
            return EXIT_VALIDATION
    if not args.out:
        _write(None, serialize_graph(graph))
    return EXIT_OK


def cmd_enrich(args: argparse.Namespace) -> int:
    topology = parse_graph_json(_read(args.topology))
    advisories = load_advisories(_read(args.advisories))
    aliases = load_aliases(_read(args.aliases))
    rules = load_rules(_read(args.rules)) if args.rules else default_rules()
    enriched = enrich(topology, match_components(topology, aliases, advisories), rules)
    _write(args.out, enriched_to_json(enriched))
    return EXIT_OK


def cmd_generate(args: argparse.Namespace) -> int:
    enriched = enriched_from_json(_read(args.enriched))
    graph = generate(enriched, args.start, PrivilegeLevel.parse(args.privilege))
    _write(args.out, attack_graph_to_json(graph))
    if args.dot:
        _write(args.dot, export(graph, ExportFormat.DOT))
    return EXIT_OK


def cmd_paths(args: argparse.Namespace) -> int:
    enriched = enriched_from_json(_read(args.enriched))
    paths = enumerate_paths(enriched, args.source, args.target, max_len=args.max_len)
    doc = [
        {"nodes": list(p.node_sequence), "exploits": list(p.exploit_sequence), "length": p.length}
        for p in paths
    ]
    _write(args.out, json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def cmd_analyze(args: argparse.Namespace) -> int:
    enriched = enriched_from_json(_read(args.enriched))
    epss = load_epss(_read(args.epss))
    reports, _ = analyze_all_targets(enriched, epss, max_len=args.max_len)
    _write(args.out, reports_to_csv(reports, snapshot_date=epss.snapshot_date))
    return EXIT_OK


def cmd_scenario(args: argparse.Namespace) -> int:
    base = enriched_from_json(_read(args.enriched))
    overlay = parse_overlay(_read(args.overlay))
    epss = load_epss(_read(args.epss))
    variant = apply(base, overlay)
    start_id, initial = overlay.resolved_start(args.start, PrivilegeLevel.parse(args.privilege))
    result = diff(base, variant, start_id, initial, epss, max_len=args.max_len)
    _write(args.diff_out, diff_to_json(result, overlay.name))
    return EXIT_OK


def cmd_fetch_epss(args: argparse.Namespace) -> int:
    source = OfflineSource(Path(args.offline)) if args.offline else RemoteSource(args.url)
    config = EpssFetchConfig(
        source=source,
        cache_dir=Path(args.cache_dir) if args.cache_dir else None,
        max_age_seconds=args.max_age,
    )
    table = fetch_epss(config)
    lines = []
    if table.snapshot_date:
        lines.append(f"#score_date:{table.snapshot_date}")
    lines.append("cve,epss,percentile")
    lines.extend(f"{cve},{score}," for cve, score in table.scores)
    _write(args.out, "\n".join(lines) + "\n")
    print(f"{len(table.scores)} scores, snapshot {table.snapshot_date or 'unknown'}", file=sys.stderr)
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from icsgraph.server import create_app

    data_dir = Path(args.data_dir or os.environ.get("ICSGRAPH_DATA_DIR", "icsgraph-data"))
    static_dir = Path(args.static_dir) if args.static_dir else None
    app = create_app(data_dir, static_dir=static_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="icsgraph", description="ICS attack-graph analysis pipeline")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="parse a blueprint into a connectivity graph")
    p.add_argument("blueprint")
    p.add_argument("--validate", action="store_true", help="report validation issues (exit 2 if any)")
    p.add_argument("--out", help="write graph JSON here instead of stdout")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("enrich", help="attach classified vulnerabilities to a graph")
    p.add_argument("--topology", required=True)
    p.add_argument("--advisories", required=True)
    p.add_argument("--aliases", required=True)
    p.add_argument("--rules", help="rule set JSON (defaults to the shipped knowledge base)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_enrich)

    p = sub.add_parser("generate", help="simulate attacker movement from a start node")
    p.add_argument("--enriched", required=True)
    p.add_argument("--start", required=True)
    p.add_argument("--privilege", default="OS(ADMIN)")
    p.add_argument("--out", required=True)
    p.add_argument("--dot", help="also write a Graphviz rendering here")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("paths", help="enumerate exploit paths between two devices")
    p.add_argument("--enriched", required=True)
    p.add_argument("--source", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--max-len", type=int, default=8)
    p.add_argument("--out")
    p.set_defaults(func=cmd_paths)

    p = sub.add_parser("analyze", help="per-target exploitation likelihood report")
    p.add_argument("--enriched", required=True)
    p.add_argument("--epss", required=True)
    p.add_argument("--max-len", type=int, default=8)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("scenario", help="apply a what-if overlay and diff the outcome")
    p.add_argument("--enriched", required=True)
    p.add_argument("--overlay", required=True)
    p.add_argument("--epss", required=True)
    p.add_argument("--start", required=True)
    p.add_argument("--privilege", default="OS(ADMIN)")
    p.add_argument("--max-len", type=int, default=8)
    p.add_argument("--diff-out", required=True)
    p.set_defaults(func=cmd_scenario)

    p = sub.add_parser("fetch-epss", help="ingest an EPSS snapshot (offline file or remote URL)")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--offline", help="local snapshot CSV")
    group.add_argument("--url", help="remote snapshot URL (plain or gzipped CSV)")
    p.add_argument("--cache-dir")
    p.add_argument("--max-age", type=float, default=24 * 3600.0, help="cache lifetime in seconds")
    p.add_argument("--out")
    p.set_defaults(func=cmd_fetch_epss)

    p = sub.add_parser("serve", help="run the HTTP API (and UI, when assets are built)")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8080)
    p.add_argument("--data-dir", help="workspace root (or env ICSGRAPH_DATA_DIR)")
    p.add_argument("--static-dir", help="built UI assets to serve at /")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except IcsGraphError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as exc:  # noqa: BLE001 - last-resort boundary for scripting
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
