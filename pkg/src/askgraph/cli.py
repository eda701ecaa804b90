"""Operator command line: ingest corpora, generate fixtures, serve, query.

Exit codes: 0 success, 1 input error (bad files, bad queries, bad flags),
2 backend error (LLM unreachable or unusable). Machine-readable mode
(--json / --format json) writes exactly one JSON document to stdout;
everything else goes to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Dict, List, Optional

from .config import ServiceConfig, parse_service_config, parse_synthetic_config
from .cypher import parse as parse_query
from .cypher import pretty_print, validate
from .cypher.executor import execute
from .errors import (
    AskGraphError,
    BackendUnavailable,
    ConfigError,
    MalformedModelOutput,
    QueryError,
    UngeneratableQuery,
)
from .graph import PropertyGraph
from .ingest import (
    export_graph_json,
    generate_synthetic,
    import_conll04,
    load_graph_json,
)
from .linking import build_index
from .llm import HttpChatBackend, MockLLM
from .pipeline import PipelineConfig, answer_question
from .service import create_app, result_payload

BACKEND_ERRORS = (BackendUnavailable, MalformedModelOutput, UngeneratableQuery)


def _err(message: str) -> None:
    print(f"error: {message}", file=sys.stderr)


def _emit(payload: Dict[str, Any], as_json: bool, render_text) -> None:
    if as_json:
        print(json.dumps(payload, ensure_ascii=False, indent=2))
    else:
        render_text(payload)


def _stats_payload(graph: PropertyGraph) -> Dict[str, Any]:
    report = graph.stats()
    return {
        "nodes_by_label": report.nodes_by_label,
        "relationships_by_type": report.relationships_by_type,
        "total_nodes": report.total_nodes,
        "total_relationships": report.total_relationships,
        "total_properties": report.total_properties,
    }


def _render_stats(payload: Dict[str, Any]) -> None:
    print(f"nodes: {payload['total_nodes']}")
    for label, count in payload["nodes_by_label"].items():
        print(f"  {label}: {count}")
    print(f"relationships: {payload['total_relationships']}")
    for rel_type, count in payload["relationships_by_type"].items():
        print(f"  {rel_type}: {count}")
    print(f"properties: {payload['total_properties']}")


def _render_table(columns: List[str], rows: List[List[Any]]) -> None:
    def cell(value: Any) -> str:
        if isinstance(value, dict):
            if "node" in value:
                return f"{value.get('name', value['node'])}"
            if "relationship" in value:
                return f"{value.get('type', value['relationship'])}"
        if value is None:
            return "null"
        return str(value)

    rendered = [[cell(v) for v in row] for row in rows]
    widths = [len(c) for c in columns]
    for row in rendered:
        for i, text in enumerate(row):
            widths[i] = max(widths[i], len(text))
    header = "  ".join(c.ljust(widths[i]) for i, c in enumerate(columns))
    print(header)
    print("  ".join("-" * w for w in widths))
    for row in rendered:
        print("  ".join(text.ljust(widths[i]) for i, text in enumerate(row)))
    print(f"({len(rows)} rows)", file=sys.stderr)


# -- subcommands -----------------------------------------------------------------


def cmd_ingest(args: argparse.Namespace) -> int:
    if args.format == "conll04":
        graph = import_conll04(args.input)
    else:
        graph = load_graph_json(args.input)
    export_graph_json(graph, args.out)
    report = graph.stats()
    print(
        f"wrote {args.out}: {report.total_nodes} nodes, "
        f"{report.total_relationships} relationships",
        file=sys.stderr,
    )
    return 0


def cmd_generate(args: argparse.Namespace) -> int:
    config = parse_synthetic_config(args.config, seed=args.seed)
    graph = generate_synthetic(config)
    export_graph_json(graph, args.out)
    report = graph.stats()
    print(
        f"wrote {args.out}: {report.total_nodes} nodes, "
        f"{report.total_relationships} relationships, "
        f"{report.total_properties} properties (seed {config.seed})",
        file=sys.stderr,
    )
    return 0


def cmd_stats(args: argparse.Namespace) -> int:
    graph = load_graph_json(args.graph)
    _emit(_stats_payload(graph), args.json, _render_stats)
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    config = parse_service_config(args.config)
    app = create_app(config=config)
    print(f"serving on http://{config.host}:{config.port}", file=sys.stderr)
    uvicorn.run(app, host=config.host, port=config.port, log_level="warning")
    return 0


def _query_backend(args: argparse.Namespace, service_config: Optional[ServiceConfig]):
    if args.mock:
        return MockLLM(args.mock)
    if service_config and service_config.llm.mode == "http" and service_config.llm.url:
        llm = service_config.llm
        return HttpChatBackend(
            url=llm.url,
            model=llm.model or "",
            api_key_env=llm.api_key_env,
            timeout_seconds=llm.timeout_seconds,
            max_concurrent=llm.max_concurrent,
        )
    if service_config and service_config.llm.mode == "mock" and service_config.llm.fixtures_path:
        return MockLLM(service_config.llm.fixtures_path)
    return None


def cmd_query(args: argparse.Namespace) -> int:
    graph = load_graph_json(args.graph)
    service_config = parse_service_config(args.config) if args.config else None
    limits = service_config.limits if service_config else ServiceConfig().limits

    if args.cypher:
        ast = parse_query(args.cypher)
        report = validate(ast, graph.schema())
        if not report.ok:
            raise QueryError(report.errors[0].message)
        result = execute(ast, graph, max_bindings=limits.max_bindings)
        payload: Dict[str, Any] = {"cypher": pretty_print(ast)}
        payload.update(result_payload(graph, result, limits.subgraph_node_cap))
        payload["warnings"] = [f.message for f in report.warnings]
    else:
        backend = _query_backend(args, service_config)
        if backend is None:
            raise ConfigError(
                "--nl needs an LLM backend: pass --mock FIXTURES or --config "
                "with an [llm] section (never downgrades silently)"
            )
        index = build_index(
            graph,
            service_config.linker.honorifics if service_config else ("fray", "don", "doña", "fr."),
        )
        pipeline_config = PipelineConfig(
            linker_threshold=service_config.linker.threshold if service_config else 0.55,
            linker_top_k=service_config.linker.top_k if service_config else 5,
            max_bindings=limits.max_bindings,
            summary_row_budget=limits.summary_row_budget,
        )
        response = answer_question(args.nl, graph, index, backend, pipeline_config)
        payload = {
            "question": response.question,
            "cypher": response.generated_cypher,
            "answer": response.answer_text,
            "diagnostics": response.diagnostics,
        }
        payload.update(result_payload(graph, response.result, limits.subgraph_node_cap))

    if args.format == "table":
        if payload.get("answer"):
            print(f"{payload['answer']}\n", file=sys.stderr)
        _render_table(payload["columns"], payload["rows"])
    else:
        # strip timings so repeated runs are byte-identical
        diagnostics = payload.get("diagnostics")
        if isinstance(diagnostics, dict):
            diagnostics.pop("timings", None)
        print(json.dumps(payload, ensure_ascii=False, indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="askgraph",
        description="Explore text-derived relational graphs with natural-language "
        "questions or Cypher-subset queries.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_ingest = sub.add_parser("ingest", help="validate and normalize a corpus file")
    p_ingest.add_argument("input", help="graph document JSON or CoNLL04 annotation file")
    p_ingest.add_argument("--format", choices=["json", "conll04"], default="json")
    p_ingest.add_argument("--out", required=True, help="canonical graph document to write")
    p_ingest.set_defaults(fn=cmd_ingest)

    p_generate = sub.add_parser("generate", help="generate a synthetic corpus")
    p_generate.add_argument("--config", required=True, help="synthetic config file")
    p_generate.add_argument("--seed", type=int, default=None, help="override the config seed")
    p_generate.add_argument("--out", required=True)
    p_generate.set_defaults(fn=cmd_generate)

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--config", required=True, help="service config file")
    p_serve.set_defaults(fn=cmd_serve)

    p_query = sub.add_parser("query", help="run one query against a graph document")
    mode = p_query.add_mutually_exclusive_group(required=True)
    mode.add_argument("--nl", help="natural-language question")
    mode.add_argument("--cypher", help="Cypher-subset query")
    p_query.add_argument("graph", help="graph document JSON")
    p_query.add_argument("--mock", help="mock LLM fixtures file or directory")
    p_query.add_argument("--config", help="service config file (for a live backend)")
    p_query.add_argument("--format", choices=["json", "table"], default="json")
    p_query.set_defaults(fn=cmd_query)

    p_stats = sub.add_parser("stats", help="print the distribution report of a document")
    p_stats.add_argument("graph")
    p_stats.add_argument("--json", action="store_true", help="emit one JSON document")
    p_stats.set_defaults(fn=cmd_stats)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except BACKEND_ERRORS as exc:
        stage = getattr(exc, "stage", None)
        _err(f"{type(exc).__name__}{f' (stage {stage})' if stage else ''}: {exc}")
        return 2
    except (AskGraphError, OSError, json.JSONDecodeError) as exc:
        _err(f"{type(exc).__name__}: {exc}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
