"""Graph document interchange: one JSON file holding the whole graph.

The document round-trips losslessly: load(export(g)) reproduces g element
by element. Export output is canonical (elements in id order, fixed key
order, 2-space indent) so fixtures diff cleanly. The published JSON
Schema lives next to this module (graph-document.schema.json).
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import IO, Any, Dict, List, Union

from ..errors import DanglingReference, DuplicateId, SchemaViolation
from ..graph import EntityNode, PropertyGraph

SCHEMA_PATH = Path(__file__).with_name("graph-document.schema.json")

_SCALAR_TYPES = (str, int, float, bool)


def _require(condition: bool, path: str, message: str) -> None:
    if not condition:
        raise SchemaViolation(path, message)


def _check_scalar_map(value: Any, path: str) -> Dict[str, Any]:
    _require(isinstance(value, dict), path, "must be an object")
    for key, item in value.items():
        _require(isinstance(key, str) and key != "", f"{path}.{key}", "keys must be non-empty strings")
        _require(
            isinstance(item, _SCALAR_TYPES) and not isinstance(item, dict),
            f"{path}.{key}",
            "values must be scalars (string/number/boolean)",
        )
    return value


def document_from_graph(graph: PropertyGraph) -> Dict[str, Any]:
    """Serialize a graph to the interchange document (plain dicts)."""
    nodes: List[Dict[str, Any]] = []
    for node in graph.nodes():
        if isinstance(node, EntityNode):
            nodes.append(
                {
                    "id": node.id,
                    "kind": "entity",
                    "name": node.name,
                    "labels": list(node.labels),
                    "properties": {k: node.properties[k] for k in sorted(node.properties)},
                }
            )
        else:
            nodes.append(
                {
                    "id": node.id,
                    "kind": "paragraph",
                    "text": node.text,
                    "metadata": {k: node.metadata[k] for k in sorted(node.metadata)},
                }
            )
    relationships: List[Dict[str, Any]] = []
    for rel in graph.relationships():
        relationships.append(
            {
                "id": rel.id,
                "source": rel.source,
                "target": rel.target,
                "type": rel.rel_type,
                "category": rel.category,
                "sentence": rel.sentence,
                "paragraph_id": rel.paragraph_id,
                "properties": {k: rel.properties[k] for k in sorted(rel.properties)},
            }
        )
    return {"nodes": nodes, "relationships": relationships}


def graph_from_document(document: Dict[str, Any]) -> PropertyGraph:
    """Build and finalize a graph from an interchange document."""
    _require(isinstance(document, dict), "$", "document must be a JSON object")
    nodes = document.get("nodes", [])
    relationships = document.get("relationships", [])
    _require(isinstance(nodes, list), "nodes", "must be an array")
    _require(isinstance(relationships, list), "relationships", "must be an array")

    graph = PropertyGraph()
    seen_ids = set()
    for i, record in enumerate(nodes):
        path = f"nodes[{i}]"
        _require(isinstance(record, dict), path, "must be an object")
        node_id = record.get("id")
        _require(isinstance(node_id, str) and node_id != "", f"{path}.id", "must be a non-empty string")
        if node_id in seen_ids:
            raise DuplicateId(node_id)
        seen_ids.add(node_id)
        kind = record.get("kind")
        if kind == "entity":
            name = record.get("name")
            _require(isinstance(name, str) and name != "", f"{path}.name", "must be a non-empty string")
            labels = record.get("labels")
            _require(
                isinstance(labels, list) and labels and all(isinstance(l, str) and l for l in labels),
                f"{path}.labels",
                "must be a non-empty array of non-empty strings",
            )
            properties = _check_scalar_map(record.get("properties", {}), f"{path}.properties")
            graph.add_entity(name, labels, properties, node_id=node_id)
        elif kind == "paragraph":
            text = record.get("text")
            _require(isinstance(text, str) and text != "", f"{path}.text", "must be a non-empty string")
            metadata = _check_scalar_map(record.get("metadata", {}), f"{path}.metadata")
            graph.add_paragraph(text, metadata, node_id=node_id)
        else:
            raise SchemaViolation(f"{path}.kind", "must be 'entity' or 'paragraph'")

    for i, record in enumerate(relationships):
        path = f"relationships[{i}]"
        _require(isinstance(record, dict), path, "must be an object")
        rel_id = record.get("id")
        _require(isinstance(rel_id, str) and rel_id != "", f"{path}.id", "must be a non-empty string")
        if rel_id in seen_ids:
            raise DuplicateId(rel_id)
        seen_ids.add(rel_id)
        for key in ("source", "target"):
            value = record.get(key)
            _require(isinstance(value, str) and value != "", f"{path}.{key}", "must be a non-empty string")
            if not graph.has_node(value):
                raise DanglingReference(value)
        rel_type = record.get("type")
        _require(isinstance(rel_type, str) and rel_type != "", f"{path}.type", "must be a non-empty string")
        category = record.get("category", "")
        _require(isinstance(category, str), f"{path}.category", "must be a string")
        sentence = record.get("sentence", "")
        _require(isinstance(sentence, str), f"{path}.sentence", "must be a string")
        paragraph_id = record.get("paragraph_id")
        if paragraph_id is not None:
            _require(isinstance(paragraph_id, str), f"{path}.paragraph_id", "must be a string or null")
            if not graph.has_node(paragraph_id):
                raise DanglingReference(paragraph_id)
        properties = _check_scalar_map(record.get("properties", {}), f"{path}.properties")
        graph.add_relationship(
            record["source"],
            record["target"],
            rel_type,
            category=category,
            sentence=sentence,
            paragraph_id=paragraph_id,
            properties=properties,
            rel_id=rel_id,
        )
    return graph.finalize()


def dumps_document(document: Dict[str, Any]) -> str:
    return json.dumps(document, ensure_ascii=False, indent=2) + "\n"


def load_graph_json(source: Union[str, Path, IO[str], Dict[str, Any]]) -> PropertyGraph:
    """Load a graph from a path, file object, JSON text or parsed document."""
    if isinstance(source, dict):
        return graph_from_document(source)
    if hasattr(source, "read"):
        document = json.load(source)
    else:
        text = str(source)
        if text.lstrip().startswith("{"):
            document = json.loads(text)
        else:
            with open(text, "r", encoding="utf-8") as fh:
                document = json.load(fh)
    if not isinstance(document, dict):
        raise SchemaViolation("$", "document must be a JSON object")
    return graph_from_document(document)


def export_graph_json(graph: PropertyGraph, path: Union[str, Path, None] = None) -> Dict[str, Any]:
    """Export a finalized graph; optionally write the canonical JSON text."""
    document = document_from_graph(graph)
    if path is not None:
        Path(path).write_text(dumps_document(document), encoding="utf-8")
    return document
