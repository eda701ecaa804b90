"""Two-stage LLM workflow over the graph.

extract_entities -> resolve_all -> build_generation_prompt ->
generate_cypher -> execute -> summarize_answer, in exactly that order.
Extraction and generation each get at most one retry/repair round; a
summary failure never fails the request (it degrades to a deterministic
template). Under MockLLM the whole pipeline is deterministic: identical
question and fixtures produce a byte-identical response minus timings.

Prompt templates are editable text files in askgraph/prompts/ with named
placeholders; an alternative directory can be given per call.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from .cypher import parse, pretty_print, validate
from .cypher.ast import QueryAst
from .cypher.executor import QueryResult, execute
from .errors import (
    AskGraphError,
    MalformedModelOutput,
    ParseError,
    PipelineError,
    UngeneratableQuery,
)
from .graph import EntityNode, GraphSchema, ParagraphNode, PropertyGraph, Relationship
from .linking import (
    DEFAULT_THRESHOLD,
    DEFAULT_TOP_K,
    LinkIndex,
    Resolution,
    resolve_all,
)
from .llm import LlmBackend, Message

MENTION_KEYS = ("people", "organisations", "locations", "paragraph_ids")


@dataclass
class PipelineConfig:
    linker_threshold: float = DEFAULT_THRESHOLD
    linker_top_k: int = DEFAULT_TOP_K
    max_bindings: int = 1_000_000
    summary_row_budget: int = 100
    extraction_temperature: float = 0.0
    generation_temperature: float = 0.0
    summary_temperature: float = 0.3
    max_tokens: int = 1024
    prompt_dir: Optional[Union[str, Path]] = None


@dataclass
class ExtractedMentions:
    people: List[str] = field(default_factory=list)
    organisations: List[str] = field(default_factory=list)
    locations: List[str] = field(default_factory=list)
    paragraph_ids: List[str] = field(default_factory=list)
    raw_model_output: str = ""

    def all_mentions(self) -> List[str]:
        seen: Dict[str, None] = {}
        for key in MENTION_KEYS:
            for mention in getattr(self, key):
                seen.setdefault(mention, None)
        return list(seen)


@dataclass
class NlQueryResponse:
    question: str
    generated_cypher: str
    result: Optional[QueryResult]
    answer_text: Optional[str]
    diagnostics: Dict[str, Any]


def load_template(name: str, prompt_dir: Optional[Union[str, Path]] = None) -> str:
    if prompt_dir is not None:
        return (Path(prompt_dir) / f"{name}.txt").read_text(encoding="utf-8")
    return resources.files("askgraph.prompts").joinpath(f"{name}.txt").read_text(
        encoding="utf-8"
    )


def strip_code_fences(text: str) -> str:
    """Drop markdown code fences and surrounding noise from model output."""
    text = text.strip()
    if text.startswith("```"):
        lines = text.splitlines()
        if lines and lines[0].startswith("```"):
            lines = lines[1:]
        if lines and lines[-1].strip().startswith("```"):
            lines = lines[:-1]
        text = "\n".join(lines).strip()
    return text


def _tag(error: AskGraphError, stage: str) -> AskGraphError:
    if isinstance(error, PipelineError):
        return error.with_stage(stage)
    setattr(error, "stage", stage)
    return error


# -- stage 1: entity extraction ----------------------------------------------------


def extraction_messages(
    question: str, prompt_dir: Optional[Union[str, Path]] = None
) -> List[Message]:
    return [("system", load_template("extraction", prompt_dir)), ("user", question)]


def _parse_mentions(raw: str) -> ExtractedMentions:
    text = strip_code_fences(raw)
    start, end = text.find("{"), text.rfind("}")
    if start < 0 or end <= start:
        raise MalformedModelOutput("extraction output contains no JSON object")
    try:
        payload = json.loads(text[start : end + 1])
    except json.JSONDecodeError as exc:
        raise MalformedModelOutput(f"extraction output is not valid JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise MalformedModelOutput("extraction output must be a JSON object")
    mentions = ExtractedMentions(raw_model_output=raw)
    for key in MENTION_KEYS:
        value = payload.get(key, [])
        if isinstance(value, str):
            value = [value]
        if not isinstance(value, list) or any(not isinstance(v, str) for v in value):
            raise MalformedModelOutput(f"extraction key {key!r} must be a list of strings")
        deduped = list(dict.fromkeys(v for v in value if v.strip()))
        setattr(mentions, key, deduped)
    return mentions


def extract_entities(
    question: str,
    backend: LlmBackend,
    config: Optional[PipelineConfig] = None,
) -> ExtractedMentions:
    """NER round-trip; one retry with a JSON-only reminder on bad output."""
    config = config or PipelineConfig()
    if not question.strip():
        raise ValueError("question must be non-empty")
    messages = extraction_messages(question, config.prompt_dir)
    try:
        raw = backend.complete(
            messages, temperature=config.extraction_temperature, max_tokens=config.max_tokens
        )
    except AskGraphError as exc:
        raise _tag(exc, "extract_entities")
    try:
        return _parse_mentions(raw)
    except MalformedModelOutput:
        retry = messages + [
            ("assistant", raw),
            (
                "user",
                "That was not parseable. Reply with the JSON object only, "
                'using exactly the keys "people", "organisations", "locations", '
                '"paragraph_ids".',
            ),
        ]
        try:
            raw = backend.complete(
                retry, temperature=config.extraction_temperature, max_tokens=config.max_tokens
            )
        except AskGraphError as exc:
            raise _tag(exc, "extract_entities")
        try:
            return _parse_mentions(raw)
        except MalformedModelOutput as exc:
            raise _tag(exc, "extract_entities")


# -- stage 2: schema-aware generation ------------------------------------------------


def schema_prompt_text(schema: GraphSchema) -> str:
    lines = ["Node labels (with node counts):"]
    if not schema.node_labels:
        lines.append("  (none; the graph is empty)")
    for label, count in schema.node_labels.items():
        keys = ", ".join(schema.node_property_keys.get(label, ()))
        suffix = f"; properties: {keys}" if keys else ""
        lines.append(f"  {label}: {count} nodes{suffix}")
    lines.append("Relationship types (with counts):")
    if not schema.relationship_types:
        lines.append("  (none)")
    for rel_type, count in schema.relationship_types.items():
        lines.append(f"  {rel_type}: {count} relationships")
    return "\n".join(lines)


def resolutions_prompt_text(resolutions: Dict[str, Resolution]) -> str:
    if not resolutions:
        return "  (the question mentions no known entities)"
    lines = []
    for mention, resolution in resolutions.items():
        if resolution.best is not None:
            line = f'  user said "{mention}" → database name "{resolution.best.canonical_name}"'
            if resolution.ambiguous:
                line += " (ambiguous match)"
        else:
            line = f'  user said "{mention}" (no database match; use it as written)'
        lines.append(line)
    return "\n".join(lines)


def build_generation_prompt(
    question: str,
    schema: GraphSchema,
    resolutions: Dict[str, Resolution],
    prompt_dir: Optional[Union[str, Path]] = None,
) -> List[Message]:
    system = load_template("generation", prompt_dir).format(
        schema=schema_prompt_text(schema),
        resolutions=resolutions_prompt_text(resolutions),
        grammar=load_template("grammar_summary", prompt_dir),
    )
    return [("system", system), ("user", question)]


def generate_cypher(
    messages: Sequence[Message],
    backend: LlmBackend,
    schema: Optional[GraphSchema] = None,
    config: Optional[PipelineConfig] = None,
) -> Tuple[QueryAst, str, Dict[str, Any]]:
    """Generate, parse and validate a query; one repair round on failure.

    Returns (ast, canonical text, diagnostics fragment).
    """
    config = config or PipelineConfig()
    diagnostics: Dict[str, Any] = {"repairs": 0, "validation_warnings": []}
    messages = list(messages)
    try:
        raw = backend.complete(
            messages, temperature=config.generation_temperature, max_tokens=config.max_tokens
        )
    except AskGraphError as exc:
        raise _tag(exc, "generate_cypher")

    def attempt(text: str) -> Tuple[Optional[QueryAst], Optional[str]]:
        candidate = strip_code_fences(text)
        try:
            ast = parse(candidate)
        except ParseError as exc:  # includes UnsupportedFeature
            return None, str(exc)
        report = validate(ast, schema)
        if not report.ok:
            return None, "; ".join(f.message for f in report.errors)
        diagnostics["validation_warnings"] = [f.message for f in report.warnings]
        return ast, None

    ast, error = attempt(raw)
    diagnostics["raw_generation"] = raw
    if ast is None:
        diagnostics["repairs"] = 1
        repair = load_template("repair", config.prompt_dir).format(
            error=error, grammar=load_template("grammar_summary", config.prompt_dir)
        )
        messages = messages + [("assistant", raw), ("user", repair)]
        try:
            raw = backend.complete(
                messages,
                temperature=config.generation_temperature,
                max_tokens=config.max_tokens,
            )
        except AskGraphError as exc:
            raise _tag(exc, "generate_cypher")
        diagnostics["raw_repair"] = raw
        ast, error = attempt(raw)
        if ast is None:
            raise _tag(
                UngeneratableQuery(f"model output still rejected after repair: {error}"),
                "generate_cypher",
            )
    return ast, pretty_print(ast), diagnostics


# -- stage 3: summary ------------------------------------------------------------------


def _value_for_prompt(value: Any) -> Any:
    if isinstance(value, EntityNode):
        return f"{value.name} ({'/'.join(value.labels)})"
    if isinstance(value, ParagraphNode):
        return f"paragraph {value.id}"
    if isinstance(value, Relationship):
        return f"{value.rel_type} relationship {value.id}"
    return value


def fallback_summary(result: QueryResult) -> str:
    return (
        f"Query returned {len(result.rows)} rows / {len(result.subgraph.nodes)} nodes / "
        f"{len(result.subgraph.relationships)} relationships"
    )


def summary_messages(
    question: str,
    result: QueryResult,
    row_budget: int,
    prompt_dir: Optional[Union[str, Path]] = None,
) -> List[Message]:
    shown = result.rows[:row_budget]
    rows_text = "\n".join(
        json.dumps([_value_for_prompt(v) for v in row], ensure_ascii=False) for row in shown
    )
    truncation = ""
    if len(result.rows) > row_budget:
        truncation = f" (truncated to the first {row_budget} of {len(result.rows)} rows)"
    body = load_template("summary", prompt_dir).format(
        question=question,
        columns=json.dumps(result.columns, ensure_ascii=False),
        truncation_notice=truncation,
        rows=rows_text if shown else "(no rows)",
    )
    return [("user", body)]


def summarize_answer(
    question: str,
    result: QueryResult,
    backend: LlmBackend,
    config: Optional[PipelineConfig] = None,
) -> str:
    """NL summary; degrades to a deterministic template, never raises."""
    config = config or PipelineConfig()
    messages = summary_messages(question, result, config.summary_row_budget, config.prompt_dir)
    try:
        text = backend.complete(
            messages, temperature=config.summary_temperature, max_tokens=config.max_tokens
        )
    except AskGraphError:
        return fallback_summary(result)
    text = text.strip()
    return text if text else fallback_summary(result)


# -- full pipeline -----------------------------------------------------------------------


def answer_question(
    question: str,
    graph: PropertyGraph,
    index: LinkIndex,
    backend: LlmBackend,
    config: Optional[PipelineConfig] = None,
) -> NlQueryResponse:
    """Run the whole workflow; stage failures carry a .stage tag."""
    config = config or PipelineConfig()
    if not question.strip():
        raise ValueError("question must be non-empty")
    diagnostics: Dict[str, Any] = {"stages": [], "timings": {}}

    def run_stage(name: str, fn):
        started = time.perf_counter()
        try:
            value = fn()
        except AskGraphError as exc:
            diagnostics["timings"][name] = time.perf_counter() - started
            diagnostics["stages"].append({"stage": name, "outcome": "error"})
            raise _tag(exc, name) if not getattr(exc, "stage", None) else exc
        diagnostics["timings"][name] = time.perf_counter() - started
        diagnostics["stages"].append({"stage": name, "outcome": "ok"})
        return value

    mentions = run_stage("extract_entities", lambda: extract_entities(question, backend, config))
    diagnostics["mentions"] = {key: getattr(mentions, key) for key in MENTION_KEYS}

    resolutions = run_stage(
        "resolve_entities",
        lambda: resolve_all(
            mentions.all_mentions(), index, threshold=config.linker_threshold, k=config.linker_top_k
        ),
    )
    diagnostics["entity_resolutions"] = [
        {
            "mention": res.mention,
            "node_id": res.best.node_id if res.best else None,
            "canonical_name": res.best.canonical_name if res.best else None,
            "score": round(res.best.score, 6) if res.best else None,
            "matched_via": res.best.matched_via if res.best else None,
            "ambiguous": res.ambiguous,
        }
        for res in resolutions.values()
    ]

    schema = graph.schema()
    prompt = run_stage(
        "build_generation_prompt",
        lambda: build_generation_prompt(question, schema, resolutions, config.prompt_dir),
    )

    ast, cypher_text, generation_diag = run_stage(
        "generate_cypher", lambda: generate_cypher(prompt, backend, schema, config)
    )
    diagnostics.update(generation_diag)

    result = run_stage("execute", lambda: execute(ast, graph, max_bindings=config.max_bindings))

    answer = run_stage(
        "summarize_answer", lambda: summarize_answer(question, result, backend, config)
    )

    return NlQueryResponse(
        question=question,
        generated_cypher=cypher_text,
        result=result,
        answer_text=answer,
        diagnostics=diagnostics,
    )
