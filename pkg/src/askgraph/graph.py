"""Embedded property-graph store.

The store has a two-phase lifecycle: a single writer populates it (ingest
mode), then ``finalize()`` freezes it. A finalized graph is immutable and
safe to share across concurrent readers; all read operations are pure.

Conventions fixed here and relied on everywhere else:

* Ids live in one namespace shared by entity nodes, paragraph nodes and
  relationships. All listings are ordered by id (plain string order).
* Paragraph nodes carry the implicit label ``"Paragraph"`` for schema,
  stats and label matching, mirroring how a label-per-node-type graph
  database would store them.
* Property-entry counting (the convention behind DistributionReport
  total_properties): an entity node counts its name and its label set as
  one entry each plus one per properties key; a paragraph node counts its
  text as one entry plus one per metadata key; a relationship counts its
  type as one entry, category and sentence as one entry each when
  non-empty, plus one per properties key. Structural references (ids,
  endpoints, paragraph anchors) never count.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Set, Tuple, Union

from .errors import (
    DuplicateId,
    GraphFrozen,
    GraphNotFinalized,
    InvariantViolation,
    UnknownEndpoint,
    UnknownNode,
)

Scalar = Union[str, int, float, bool]

PARAGRAPH_LABEL = "Paragraph"

# Structural fields are addressable as properties in queries (n.name,
# r.sentence, ...), so user-supplied property keys must not shadow them.
RESERVED_ENTITY_KEYS = frozenset({"id", "name", "labels"})
RESERVED_PARAGRAPH_KEYS = frozenset({"id", "text"})
RESERVED_RELATIONSHIP_KEYS = frozenset(
    {"id", "type", "category", "sentence", "paragraph_id", "source", "target"}
)


@dataclass(frozen=True)
class EntityNode:
    id: str
    name: str
    labels: Tuple[str, ...]
    properties: Dict[str, Scalar] = field(default_factory=dict)


@dataclass(frozen=True)
class ParagraphNode:
    id: str
    text: str
    metadata: Dict[str, Scalar] = field(default_factory=dict)


Node = Union[EntityNode, ParagraphNode]


@dataclass(frozen=True)
class Relationship:
    id: str
    source: str
    target: str
    rel_type: str
    category: str = ""
    sentence: str = ""
    paragraph_id: Optional[str] = None
    properties: Dict[str, Scalar] = field(default_factory=dict)


@dataclass(frozen=True)
class GraphSchema:
    """Introspection snapshot: labels, types and observed property keys.

    Orderings are lexicographic throughout so repeated calls serialize
    identically.
    """

    node_labels: Dict[str, int]
    relationship_types: Dict[str, int]
    node_property_keys: Dict[str, Tuple[str, ...]]
    relationship_property_keys: Dict[str, Tuple[str, ...]]


@dataclass(frozen=True)
class DistributionReport:
    nodes_by_label: Dict[str, int]
    relationships_by_type: Dict[str, int]
    total_nodes: int
    total_relationships: int
    total_properties: int


@dataclass
class ResultSubgraph:
    """Closed subgraph: every relationship endpoint is present in nodes."""

    nodes: List[Node] = field(default_factory=list)
    relationships: List[Relationship] = field(default_factory=list)
    truncated: bool = False


def node_labels(node: Node) -> Tuple[str, ...]:
    if isinstance(node, ParagraphNode):
        return (PARAGRAPH_LABEL,)
    return node.labels


def property_value(element: Union[Node, Relationship], key: str) -> Optional[Scalar]:
    """Resolve a property access, including structural pseudo-properties.

    Returns None when the key is absent (query semantics treat that as a
    missing value, never an error).
    """
    if isinstance(element, EntityNode):
        if key == "name":
            return element.name
        if key == "id":
            return element.id
        return element.properties.get(key)
    if isinstance(element, ParagraphNode):
        if key == "text":
            return element.text
        if key == "id":
            return element.id
        return element.metadata.get(key)
    # Relationship
    if key == "type":
        return element.rel_type
    if key == "category":
        return element.category or None
    if key == "sentence":
        return element.sentence or None
    if key == "paragraph_id":
        return element.paragraph_id
    if key == "id":
        return element.id
    return element.properties.get(key)


def property_entry_count(element: Union[Node, Relationship]) -> int:
    """Property entries per the fixed counting convention (see module doc)."""
    if isinstance(element, EntityNode):
        return 2 + len(element.properties)
    if isinstance(element, ParagraphNode):
        return 1 + len(element.metadata)
    count = 1 + len(element.properties)
    if element.category:
        count += 1
    if element.sentence:
        count += 1
    return count


def _check_scalar_map(mapping: Dict[str, Scalar], what: str, reserved: frozenset) -> None:
    for key, value in mapping.items():
        if not isinstance(key, str) or not key:
            raise InvariantViolation(f"{what}: property keys must be non-empty strings")
        if key in reserved:
            raise InvariantViolation(f"{what}: property key {key!r} is reserved")
        if not isinstance(value, (str, int, float, bool)):
            raise InvariantViolation(
                f"{what}: property {key!r} must be a scalar (text/integer/float/boolean)"
            )


class PropertyGraph:
    """In-memory property graph with an ingest-then-freeze lifecycle."""

    def __init__(self) -> None:
        self._nodes: Dict[str, Node] = {}
        self._relationships: Dict[str, Relationship] = {}
        self._outgoing: Dict[str, List[str]] = {}
        self._incoming: Dict[str, List[str]] = {}
        self._finalized = False
        self._node_counter = 0
        self._rel_counter = 0
        self._schema: Optional[GraphSchema] = None
        self._stats: Optional[DistributionReport] = None

    # -- ingest -------------------------------------------------------------

    def _require_ingest(self) -> None:
        if self._finalized:
            raise GraphFrozen("graph is finalized; no further writes allowed")

    def _claim_id(self, element_id: Optional[str], prefix: str) -> str:
        if element_id is not None:
            if not isinstance(element_id, str) or not element_id:
                raise InvariantViolation("ids must be non-empty strings")
            if element_id in self._nodes or element_id in self._relationships:
                raise DuplicateId(element_id)
            return element_id
        while True:
            if prefix == "n":
                self._node_counter += 1
                candidate = f"n{self._node_counter}"
            else:
                self._rel_counter += 1
                candidate = f"r{self._rel_counter}"
            if candidate not in self._nodes and candidate not in self._relationships:
                return candidate

    def add_entity(
        self,
        name: str,
        labels: Iterable[str],
        properties: Optional[Dict[str, Scalar]] = None,
        node_id: Optional[str] = None,
    ) -> str:
        self._require_ingest()
        labels = tuple(dict.fromkeys(labels))
        if not name:
            raise InvariantViolation("entity node name must be non-empty")
        if not labels or any(not lbl for lbl in labels):
            raise InvariantViolation("entity node needs at least one non-empty label")
        properties = dict(properties or {})
        _check_scalar_map(properties, f"node {name!r}", RESERVED_ENTITY_KEYS)
        node_id = self._claim_id(node_id, "n")
        node = EntityNode(id=node_id, name=name, labels=labels, properties=properties)
        self._nodes[node_id] = node
        self._outgoing[node_id] = []
        self._incoming[node_id] = []
        return node_id

    def add_paragraph(
        self,
        text: str,
        metadata: Optional[Dict[str, Scalar]] = None,
        node_id: Optional[str] = None,
    ) -> str:
        self._require_ingest()
        if not text:
            raise InvariantViolation("paragraph text must be non-empty")
        metadata = dict(metadata or {})
        _check_scalar_map(metadata, "paragraph", RESERVED_PARAGRAPH_KEYS)
        node_id = self._claim_id(node_id, "n")
        node = ParagraphNode(id=node_id, text=text, metadata=metadata)
        self._nodes[node_id] = node
        self._outgoing[node_id] = []
        self._incoming[node_id] = []
        return node_id

    def add_relationship(
        self,
        source: str,
        target: str,
        rel_type: str,
        category: str = "",
        sentence: str = "",
        paragraph_id: Optional[str] = None,
        properties: Optional[Dict[str, Scalar]] = None,
        rel_id: Optional[str] = None,
    ) -> str:
        self._require_ingest()
        if source not in self._nodes:
            raise UnknownEndpoint(source)
        if target not in self._nodes:
            raise UnknownEndpoint(target)
        if not rel_type:
            raise InvariantViolation("relationship type must be non-empty")
        if paragraph_id is not None and not isinstance(
            self._nodes.get(paragraph_id), ParagraphNode
        ):
            raise InvariantViolation(
                f"paragraph_id {paragraph_id!r} does not reference a paragraph node"
            )
        properties = dict(properties or {})
        _check_scalar_map(properties, f"relationship {rel_type!r}", RESERVED_RELATIONSHIP_KEYS)
        rel_id = self._claim_id(rel_id, "r")
        rel = Relationship(
            id=rel_id,
            source=source,
            target=target,
            rel_type=rel_type,
            category=category,
            sentence=sentence,
            paragraph_id=paragraph_id,
            properties=properties,
        )
        self._relationships[rel_id] = rel
        self._outgoing[source].append(rel_id)
        self._incoming[target].append(rel_id)
        return rel_id

    def finalize(self) -> "PropertyGraph":
        """Freeze the graph; verifies referential closure by full scan."""
        if self._finalized:
            return self
        for rel in self._relationships.values():
            if rel.source not in self._nodes:
                raise UnknownEndpoint(rel.source)
            if rel.target not in self._nodes:
                raise UnknownEndpoint(rel.target)
            if rel.paragraph_id is not None and not isinstance(
                self._nodes.get(rel.paragraph_id), ParagraphNode
            ):
                raise InvariantViolation(
                    f"relationship {rel.id!r} anchors missing paragraph {rel.paragraph_id!r}"
                )
        for adjacency in (self._outgoing, self._incoming):
            for node_id in adjacency:
                adjacency[node_id] = sorted(adjacency[node_id])
        self._finalized = True
        self._schema = self._build_schema()
        self._stats = self._build_stats()
        return self

    # -- reads --------------------------------------------------------------

    @property
    def finalized(self) -> bool:
        return self._finalized

    def _require_finalized(self) -> None:
        if not self._finalized:
            raise GraphNotFinalized("operation requires a finalized graph")

    def has_node(self, node_id: str) -> bool:
        return node_id in self._nodes

    def node(self, node_id: str) -> Node:
        try:
            return self._nodes[node_id]
        except KeyError:
            raise UnknownNode(node_id) from None

    def relationship(self, rel_id: str) -> Relationship:
        try:
            return self._relationships[rel_id]
        except KeyError:
            raise UnknownNode(rel_id) from None

    def element(self, element_id: str) -> Union[Node, Relationship]:
        if element_id in self._nodes:
            return self._nodes[element_id]
        if element_id in self._relationships:
            return self._relationships[element_id]
        raise UnknownNode(element_id)

    def node_ids(self) -> List[str]:
        return sorted(self._nodes)

    def relationship_ids(self) -> List[str]:
        return sorted(self._relationships)

    def nodes(self) -> List[Node]:
        return [self._nodes[i] for i in self.node_ids()]

    def relationships(self) -> List[Relationship]:
        return [self._relationships[i] for i in self.relationship_ids()]

    def entity_nodes(self) -> List[EntityNode]:
        return [n for n in self.nodes() if isinstance(n, EntityNode)]

    def paragraph_nodes(self) -> List[ParagraphNode]:
        return [n for n in self.nodes() if isinstance(n, ParagraphNode)]

    def neighbors(
        self,
        node_id: str,
        direction: str = "both",
        type_filter: Optional[Set[str]] = None,
    ) -> List[Tuple[Relationship, Node]]:
        """Edges touching a node, with the node at the far end.

        direction selects outgoing, incoming or both; both is the union of
        the two, deduplicated by relationship id. Ordered by relationship id.
        """
        if node_id not in self._nodes:
            raise UnknownNode(node_id)
        if direction not in ("outgoing", "incoming", "both"):
            raise ValueError(f"direction must be outgoing/incoming/both, got {direction!r}")
        rel_ids: List[str] = []
        if direction in ("outgoing", "both"):
            rel_ids.extend(self._outgoing[node_id])
        if direction in ("incoming", "both"):
            rel_ids.extend(self._incoming[node_id])
        seen: Set[str] = set()
        result: List[Tuple[Relationship, Node]] = []
        for rel_id in sorted(rel_ids):
            if rel_id in seen:
                continue
            seen.add(rel_id)
            rel = self._relationships[rel_id]
            if type_filter is not None and rel.rel_type not in type_filter:
                continue
            other = rel.target if rel.source == node_id else rel.source
            result.append((rel, self._nodes[other]))
        return result

    def schema(self) -> GraphSchema:
        self._require_finalized()
        assert self._schema is not None
        return self._schema

    def stats(self) -> DistributionReport:
        self._require_finalized()
        assert self._stats is not None
        return self._stats

    def total_property_entries(self) -> int:
        total = 0
        for node in self._nodes.values():
            total += property_entry_count(node)
        for rel in self._relationships.values():
            total += property_entry_count(rel)
        return total

    # -- derivations ----------------------------------------------------------

    def _build_schema(self) -> GraphSchema:
        label_counts: Dict[str, int] = {}
        node_keys: Dict[str, Set[str]] = {}
        for node in self._nodes.values():
            for label in node_labels(node):
                label_counts[label] = label_counts.get(label, 0) + 1
                keys = node_keys.setdefault(label, set())
                if isinstance(node, EntityNode):
                    keys.add("name")
                    keys.update(node.properties)
                else:
                    keys.add("text")
                    keys.update(node.metadata)
        type_counts: Dict[str, int] = {}
        rel_keys: Dict[str, Set[str]] = {}
        for rel in self._relationships.values():
            type_counts[rel.rel_type] = type_counts.get(rel.rel_type, 0) + 1
            keys = rel_keys.setdefault(rel.rel_type, set())
            if rel.category:
                keys.add("category")
            if rel.sentence:
                keys.add("sentence")
            keys.update(rel.properties)
        return GraphSchema(
            node_labels={k: label_counts[k] for k in sorted(label_counts)},
            relationship_types={k: type_counts[k] for k in sorted(type_counts)},
            node_property_keys={k: tuple(sorted(v)) for k, v in sorted(node_keys.items())},
            relationship_property_keys={
                k: tuple(sorted(v)) for k, v in sorted(rel_keys.items())
            },
        )

    def _build_stats(self) -> DistributionReport:
        schema = self._schema if self._schema is not None else self._build_schema()
        return DistributionReport(
            nodes_by_label=dict(schema.node_labels),
            relationships_by_type=dict(schema.relationship_types),
            total_nodes=len(self._nodes),
            total_relationships=len(self._relationships),
            total_properties=self.total_property_entries(),
        )


def subgraph_of(
    graph: PropertyGraph,
    node_ids: Iterable[str],
    rel_ids: Iterable[str],
    node_cap: Optional[int] = None,
) -> ResultSubgraph:
    """Build a closed ResultSubgraph from element ids.

    Endpoints of every included relationship are pulled in, so closure holds
    by construction. When node_cap is set, nodes beyond the cap (in id order)
    are dropped along with any relationship that lost an endpoint, and the
    subgraph is flagged truncated.
    """
    wanted_nodes = set(node_ids)
    rels = [graph.relationship(r) for r in sorted(set(rel_ids))]
    for rel in rels:
        wanted_nodes.add(rel.source)
        wanted_nodes.add(rel.target)
    ordered_nodes = sorted(wanted_nodes)
    truncated = False
    if node_cap is not None and len(ordered_nodes) > node_cap:
        ordered_nodes = ordered_nodes[:node_cap]
        kept = set(ordered_nodes)
        rels = [r for r in rels if r.source in kept and r.target in kept]
        truncated = True
    return ResultSubgraph(
        nodes=[graph.node(n) for n in ordered_nodes],
        relationships=rels,
        truncated=truncated,
    )
