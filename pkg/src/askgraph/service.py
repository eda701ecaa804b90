"""HTTP facade over the graph, the engine and the NL pipeline.

Every response uses the envelope {"ok": true, "data": ...} or
{"ok": false, "error": {"code", "message", ...}} so the UI handles
failures uniformly. All endpoints are read-only: the graph is finalized
before the app is built and never mutated afterwards.
"""

from __future__ import annotations

import hashlib
from pathlib import Path
from typing import Any, Dict, Optional

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .config import ServiceConfig
from .cypher import parse, pretty_print, validate
from .cypher.executor import QueryResult, execute
from .errors import (
    AskGraphError,
    BackendUnavailable,
    LexError,
    MalformedModelOutput,
    ParseError,
    ResourceLimit,
    UnboundVariable,
    UngeneratableQuery,
    UnsupportedFeature,
)
from .graph import (
    EntityNode,
    Node,
    ParagraphNode,
    PropertyGraph,
    Relationship,
    ResultSubgraph,
    subgraph_of,
)
from .ingest import dumps_document, export_graph_json, load_graph_json
from .linking import LinkIndex, build_index
from .llm import HttpChatBackend, LlmBackend, MockLLM
from .pipeline import NlQueryResponse, PipelineConfig, answer_question


def graph_fingerprint(graph: PropertyGraph) -> str:
    """Content hash of the canonical export; read-only tests compare it."""
    text = dumps_document(export_graph_json(graph))
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


# -- wire serialization --------------------------------------------------------


def node_record(node: Node) -> Dict[str, Any]:
    if isinstance(node, EntityNode):
        return {
            "id": node.id,
            "kind": "entity",
            "labels": list(node.labels),
            "name": node.name,
            "properties": dict(node.properties),
        }
    return {
        "id": node.id,
        "kind": "paragraph",
        "labels": ["Paragraph"],
        "name": node.text,
        "properties": dict(node.metadata),
    }


def relationship_record(rel: Relationship) -> Dict[str, Any]:
    return {
        "id": rel.id,
        "type": rel.rel_type,
        "category": rel.category,
        "source": rel.source,
        "target": rel.target,
        "sentence": rel.sentence,
        "paragraph_id": rel.paragraph_id,
        "properties": dict(rel.properties),
    }


def subgraph_payload(subgraph: ResultSubgraph) -> Dict[str, Any]:
    return {
        "nodes": [node_record(n) for n in subgraph.nodes],
        "relationships": [relationship_record(r) for r in subgraph.relationships],
        "truncated": subgraph.truncated,
    }


def row_value(value: Any) -> Any:
    if isinstance(value, EntityNode):
        return {"node": value.id, "name": value.name, "labels": list(value.labels)}
    if isinstance(value, ParagraphNode):
        return {"node": value.id, "name": value.text, "labels": ["Paragraph"]}
    if isinstance(value, Relationship):
        return {"relationship": value.id, "type": value.rel_type}
    return value


def result_payload(
    graph: PropertyGraph, result: QueryResult, node_cap: Optional[int]
) -> Dict[str, Any]:
    subgraph = result.subgraph
    if node_cap is not None and len(subgraph.nodes) > node_cap:
        subgraph = subgraph_of(
            graph,
            [n.id for n in subgraph.nodes],
            [r.id for r in subgraph.relationships],
            node_cap=node_cap,
        )
    return {
        "columns": list(result.columns),
        "rows": [[row_value(v) for v in row] for row in result.rows],
        "subgraph": subgraph_payload(subgraph),
    }


def _ok(data: Any, status_code: int = 200) -> JSONResponse:
    return JSONResponse({"ok": True, "data": data}, status_code=status_code)


def _fail(status_code: int, code: str, message: str, **extra: Any) -> JSONResponse:
    error = {"code": code, "message": message}
    error.update(extra)
    return JSONResponse({"ok": False, "error": error}, status_code=status_code)


def _error_response(exc: AskGraphError) -> JSONResponse:
    stage = getattr(exc, "stage", None)
    extra = {"stage": stage} if stage else {}
    if isinstance(exc, UnsupportedFeature):
        return _fail(400, "UnsupportedFeature", str(exc), line=exc.line, column=exc.column)
    if isinstance(exc, (ParseError, LexError)):
        return _fail(400, type(exc).__name__, str(exc), line=exc.line, column=exc.column)
    if isinstance(exc, UnboundVariable):
        return _fail(400, "UnboundVariable", str(exc))
    if isinstance(exc, ResourceLimit):
        return _fail(413, "ResourceLimit", str(exc))
    if isinstance(exc, BackendUnavailable):
        return _fail(502, "BackendUnavailable", str(exc), **extra)
    if isinstance(exc, (UngeneratableQuery, MalformedModelOutput)):
        return _fail(422, type(exc).__name__, str(exc), **extra)
    return _fail(400, type(exc).__name__, str(exc), **extra)


# -- app factory -----------------------------------------------------------------


def create_app(
    graph: Optional[PropertyGraph] = None,
    backend: Optional[LlmBackend] = None,
    config: Optional[ServiceConfig] = None,
    index: Optional[LinkIndex] = None,
) -> FastAPI:
    """Assemble the service; pass graph/backend directly in tests."""
    config = config or ServiceConfig()
    if graph is None and config.graph_document:
        graph = load_graph_json(config.graph_document)
    if graph is not None and index is None:
        index = build_index(graph, config.linker.honorifics)
    if backend is None:
        if config.llm.mode == "mock" and config.llm.fixtures_path:
            backend = MockLLM(config.llm.fixtures_path)
        elif config.llm.mode == "http" and config.llm.url:
            backend = HttpChatBackend(
                url=config.llm.url,
                model=config.llm.model or "",
                api_key_env=config.llm.api_key_env,
                timeout_seconds=config.llm.timeout_seconds,
                max_concurrent=config.llm.max_concurrent,
            )

    pipeline_config = PipelineConfig(
        linker_threshold=config.linker.threshold,
        linker_top_k=config.linker.top_k,
        max_bindings=config.limits.max_bindings,
        summary_row_budget=config.limits.summary_row_budget,
    )

    app = FastAPI(title="askgraph", docs_url=None, redoc_url=None)
    app.state.graph = graph
    app.state.index = index
    app.state.backend = backend
    app.state.config = config

    def require_graph() -> Optional[JSONResponse]:
        if app.state.graph is None:
            return _fail(503, "GraphNotLoaded", "no graph document is loaded")
        return None

    @app.get("/api/health")
    def health() -> JSONResponse:
        return _ok(
            {
                "status": "ok",
                "graph_loaded": app.state.graph is not None,
                "backend": type(app.state.backend).__name__ if app.state.backend else None,
            }
        )

    @app.get("/api/schema")
    def schema() -> JSONResponse:
        missing = require_graph()
        if missing:
            return missing
        s = app.state.graph.schema()
        return _ok(
            {
                "node_labels": s.node_labels,
                "relationship_types": s.relationship_types,
                "node_property_keys": {k: list(v) for k, v in s.node_property_keys.items()},
                "relationship_property_keys": {
                    k: list(v) for k, v in s.relationship_property_keys.items()
                },
            }
        )

    @app.get("/api/stats")
    def stats() -> JSONResponse:
        missing = require_graph()
        if missing:
            return missing
        report = app.state.graph.stats()
        return _ok(
            {
                "nodes_by_label": report.nodes_by_label,
                "relationships_by_type": report.relationships_by_type,
                "total_nodes": report.total_nodes,
                "total_relationships": report.total_relationships,
                "total_properties": report.total_properties,
            }
        )

    @app.post("/api/query/cypher")
    async def cypher_query(request: Request) -> JSONResponse:
        missing = require_graph()
        if missing:
            return missing
        body = await request.json()
        query = (body or {}).get("query", "")
        if not isinstance(query, str) or not query.strip():
            return _fail(400, "EmptyQuery", "request body needs a non-empty 'query'")
        graph_ = app.state.graph
        try:
            ast = parse(query)
            report = validate(ast, graph_.schema())
            if not report.ok:
                first = report.errors[0]
                return _fail(400, first.code, first.message)
            result = execute(ast, graph_, max_bindings=config.limits.max_bindings)
        except AskGraphError as exc:
            return _error_response(exc)
        payload = {"cypher": pretty_print(ast)}
        payload.update(result_payload(graph_, result, config.limits.subgraph_node_cap))
        payload["warnings"] = [f.message for f in report.warnings]
        return _ok(payload)

    @app.post("/api/query/nl")
    async def nl_query(request: Request) -> JSONResponse:
        missing = require_graph()
        if missing:
            return missing
        if app.state.backend is None:
            return _fail(502, "BackendUnavailable", "no LLM backend is configured")
        body = await request.json()
        question = (body or {}).get("question", "")
        if not isinstance(question, str) or not question.strip():
            return _fail(400, "EmptyQuestion", "request body needs a non-empty 'question'")
        try:
            response: NlQueryResponse = answer_question(
                question,
                app.state.graph,
                app.state.index,
                app.state.backend,
                pipeline_config,
            )
        except AskGraphError as exc:
            return _error_response(exc)
        payload = {
            "question": response.question,
            "cypher": response.generated_cypher,
            "answer": response.answer_text,
            "diagnostics": response.diagnostics,
        }
        payload.update(
            result_payload(app.state.graph, response.result, config.limits.subgraph_node_cap)
        )
        return _ok(payload)

    @app.get("/api/provenance/{element_id}")
    def provenance(element_id: str) -> JSONResponse:
        missing = require_graph()
        if missing:
            return missing
        graph_ = app.state.graph
        try:
            element = graph_.element(element_id)
        except AskGraphError:
            return _fail(404, "UnknownElement", f"no element with id {element_id!r}")
        if isinstance(element, Relationship):
            paragraph = None
            if element.paragraph_id is not None:
                node = graph_.node(element.paragraph_id)
                if isinstance(node, ParagraphNode):
                    paragraph = {"id": node.id, "text": node.text, "metadata": dict(node.metadata)}
            return _ok(
                {"element": "relationship", "sentence": element.sentence, "paragraph": paragraph}
            )
        if isinstance(element, ParagraphNode):
            return _ok(
                {
                    "element": "paragraph",
                    "paragraph": {
                        "id": element.id,
                        "text": element.text,
                        "metadata": dict(element.metadata),
                    },
                }
            )
        source = None
        source_id = element.properties.get("source_paragraph")
        if isinstance(source_id, str) and graph_.has_node(source_id):
            node = graph_.node(source_id)
            if isinstance(node, ParagraphNode):
                source = {"id": node.id, "text": node.text, "metadata": dict(node.metadata)}
        return _ok({"element": "node", "source_paragraph": source})

    @app.get("/api/node/{node_id}")
    def node(node_id: str) -> JSONResponse:
        missing = require_graph()
        if missing:
            return missing
        graph_ = app.state.graph
        if not graph_.has_node(node_id):
            return _fail(404, "UnknownNode", f"no node with id {node_id!r}")
        return _ok(node_record(graph_.node(node_id)))

    static_path = config.static_path
    if static_path and Path(static_path).is_dir():
        app.mount("/app", StaticFiles(directory=static_path, html=True), name="app")

    return app


def create_app_from_config(config: ServiceConfig) -> FastAPI:
    return create_app(config=config)
