"""Adapter for CoNLL04-style annotated sentences.

Several serializations of this corpus circulate; this adapter accepts
exactly one, documented in docs/conll04-format.md and summarized here:

* Sentence blocks are separated by blank lines; ``#`` starts a comment.
* A token line has two tab-separated fields: ``TOKEN<TAB>TAG`` where TAG
  is ``O`` or ``B-``/``I-`` plus an entity category (Peop, Org, Loc,
  Other).
* A relation line has three tab-separated fields:
  ``HEAD<TAB>TAIL<TAB>LABEL`` where HEAD/TAIL are 0-based indices of any
  token inside the two entity spans. Relation lines follow the token
  lines of their block.

Entity categories map to graph labels (person -> Person, organization ->
Organisation, location -> Place, other -> Other) and the five relation
labels map to KILL, WORK_FOR, ORG_BASED_IN, LIVE_IN and LOCATED_IN.
Each sentence becomes a paragraph node; every relationship carries its
sentence text as provenance. Entities are deduplicated by (normalized
surface, label), so re-importing the same text does not duplicate them.
"""

from __future__ import annotations

import re
from pathlib import Path
from typing import Dict, IO, Iterable, List, Optional, Tuple, Union

from ..errors import MalformedRecord
from ..graph import PropertyGraph
from ..linking import normalize

TAG_PATTERN = re.compile(r"^(O|[BI]-(Peop|Org|Loc|Other))$")

CATEGORY_LABELS = {
    "Peop": "Person",
    "Org": "Organisation",
    "Loc": "Place",
    "Other": "Other",
}

RELATION_TYPES = {
    "kill": ("KILL", "violence"),
    "workfor": ("WORK_FOR", "affiliation"),
    "orgbasedin": ("ORG_BASED_IN", "location"),
    "organizationbasedin": ("ORG_BASED_IN", "location"),
    "livein": ("LIVE_IN", "location"),
    "locatedin": ("LOCATED_IN", "location"),
}


def _relation_key(label: str) -> Optional[Tuple[str, str]]:
    return RELATION_TYPES.get(re.sub(r"[^a-z]", "", label.lower()))


def _blocks(lines: Iterable[str]) -> Iterable[List[Tuple[int, str]]]:
    block: List[Tuple[int, str]] = []
    for line_no, raw in enumerate(lines, start=1):
        line = raw.rstrip("\n")
        if line.startswith("#"):
            continue
        if not line.strip():
            if block:
                yield block
                block = []
            continue
        block.append((line_no, line))
    if block:
        yield block


def import_conll04(source: Union[str, Path, IO[str]]) -> PropertyGraph:
    """Parse an annotated file into a finalized graph."""
    if hasattr(source, "read"):
        lines = source.read().splitlines()
    else:
        lines = Path(source).read_text(encoding="utf-8").splitlines()

    graph = PropertyGraph()
    entity_ids: Dict[Tuple[str, str], str] = {}  # (normalized surface, label) -> node id
    sentence_index = 0

    for block in _blocks(lines):
        tokens: List[str] = []
        tags: List[str] = []
        relations: List[Tuple[int, int, int, str]] = []  # (line_no, head, tail, label)
        in_relations = False
        for line_no, line in block:
            fields = line.split("\t")
            if len(fields) == 2:
                if in_relations:
                    raise MalformedRecord(line_no, "token line after relation lines")
                token, tag = fields
                if not TAG_PATTERN.match(tag):
                    raise MalformedRecord(line_no, f"unknown entity tag {tag!r}")
                if not token:
                    raise MalformedRecord(line_no, "empty token")
                tokens.append(token)
                tags.append(tag)
            elif len(fields) == 3:
                in_relations = True
                head_raw, tail_raw, label = fields
                try:
                    head, tail = int(head_raw), int(tail_raw)
                except ValueError:
                    raise MalformedRecord(line_no, "relation indices must be integers") from None
                relations.append((line_no, head, tail, label))
            else:
                raise MalformedRecord(
                    line_no, f"expected 2 (token) or 3 (relation) tab-separated fields, got {len(fields)}"
                )

        if not tokens:
            first_line = block[0][0]
            raise MalformedRecord(first_line, "sentence block without token lines")

        sentence_index += 1
        sentence_text = " ".join(tokens)
        paragraph_id = graph.add_paragraph(
            sentence_text,
            {"sentence_index": sentence_index, "source": "conll04"},
            node_id=f"p{sentence_index}",
        )

        # entity spans: (start, end exclusive, category)
        spans: List[Tuple[int, int, str]] = []
        i = 0
        while i < len(tags):
            tag = tags[i]
            if tag.startswith("B-"):
                category = tag[2:]
                j = i + 1
                while j < len(tags) and tags[j] == f"I-{category}":
                    j += 1
                spans.append((i, j, category))
                i = j
            elif tag.startswith("I-"):
                raise MalformedRecord(block[0][0] + i, f"I- tag without preceding B- at token {i}")
            else:
                i += 1

        span_node_ids: Dict[int, str] = {}  # token index -> node id
        for start, end, category in spans:
            surface = " ".join(tokens[start:end])
            label = CATEGORY_LABELS[category]
            key = (normalize(surface), label)
            node_id = entity_ids.get(key)
            if node_id is None:
                node_id = graph.add_entity(
                    surface, [label], {"source_paragraph": paragraph_id}
                )
                entity_ids[key] = node_id
            for idx in range(start, end):
                span_node_ids[idx] = node_id

        for line_no, head, tail, label in relations:
            mapped = _relation_key(label)
            if mapped is None:
                raise MalformedRecord(line_no, f"unknown relation label {label!r}")
            rel_type, category = mapped
            for idx in (head, tail):
                if idx not in span_node_ids:
                    raise MalformedRecord(
                        line_no, f"relation argument {idx} is not inside an entity span"
                    )
            graph.add_relationship(
                span_node_ids[head],
                span_node_ids[tail],
                rel_type,
                category=category,
                sentence=sentence_text,
                paragraph_id=paragraph_id,
            )

    return graph.finalize()
