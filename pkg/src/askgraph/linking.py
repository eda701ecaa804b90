"""Fuzzy entity linking: map mentions from user questions to graph nodes.

Matching is two-tier. Exact and normalized-exact hits score 1.0; anything
else is scored with the Dice coefficient over character trigrams of the
"##"-padded normalized strings. Each entity is indexed under its
normalized name and, when different, an honorific-stripped variant
("Fray Bartolomé de Miranda" is also findable as "bartolome de miranda").

Paragraph references (mentions shaped like ``p123``) resolve against
paragraph node ids by exact match only; fuzzy-matching identifiers would
invite silently wrong provenance anchors.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from .graph import PropertyGraph

DEFAULT_HONORIFICS = ("fray", "don", "doña", "fr.")
DEFAULT_THRESHOLD = 0.55
DEFAULT_TOP_K = 5
AMBIGUITY_GAP = 0.05

PARAGRAPH_MENTION = re.compile(r"^[Pp]\d+$")

_PUNCTUATION = re.compile(r"[^\w\s]", re.UNICODE)
_WHITESPACE = re.compile(r"\s+")


def normalize(text: str) -> str:
    """Lowercase, fold diacritics to base letters, strip punctuation,
    collapse whitespace. Idempotent."""
    decomposed = unicodedata.normalize("NFD", text)
    stripped = "".join(ch for ch in decomposed if not unicodedata.combining(ch))
    lowered = stripped.lower()
    no_punct = _PUNCTUATION.sub(" ", lowered)
    return _WHITESPACE.sub(" ", no_punct).strip()


def strip_honorifics(normalized: str, honorifics: Sequence[str] = DEFAULT_HONORIFICS) -> str:
    """Drop leading honorific tokens from an already-normalized string."""
    stop = {normalize(h) for h in honorifics}
    tokens = normalized.split(" ") if normalized else []
    while tokens and tokens[0] in stop:
        tokens = tokens[1:]
    return " ".join(tokens)


def trigrams(text: str) -> FrozenSet[str]:
    if not text:
        return frozenset()
    padded = f"##{text}##"
    return frozenset(padded[i : i + 3] for i in range(len(padded) - 2))


def dice(a: FrozenSet[str], b: FrozenSet[str]) -> float:
    if not a and not b:
        return 1.0
    if not a or not b:
        return 0.0
    return 2 * len(a & b) / (len(a) + len(b))


def similarity(left: str, right: str) -> float:
    """Trigram Dice over normalized strings; symmetric, 1.0 on equal input."""
    return dice(trigrams(normalize(left)), trigrams(normalize(right)))


@dataclass(frozen=True)
class LinkCandidate:
    node_id: str
    canonical_name: str
    score: float
    matched_via: str  # exact | normalized-exact | fuzzy


@dataclass(frozen=True)
class _Entry:
    node_id: str
    name: str
    labels: Tuple[str, ...]
    forms: Tuple[str, ...]
    form_trigrams: Tuple[FrozenSet[str], ...]


@dataclass
class LinkIndex:
    entries: List[_Entry] = field(default_factory=list)
    paragraph_ids: FrozenSet[str] = frozenset()


def build_index(
    graph: PropertyGraph, honorifics: Sequence[str] = DEFAULT_HONORIFICS
) -> LinkIndex:
    """One entry per entity node, in node-id order; built once per graph."""
    entries = []
    for node in graph.entity_nodes():
        primary = normalize(node.name)
        forms = [primary]
        stripped = strip_honorifics(primary, honorifics)
        if stripped and stripped != primary:
            forms.append(stripped)
        entries.append(
            _Entry(
                node_id=node.id,
                name=node.name,
                labels=node.labels,
                forms=tuple(forms),
                form_trigrams=tuple(trigrams(f) for f in forms),
            )
        )
    paragraph_ids = frozenset(p.id for p in graph.paragraph_nodes())
    return LinkIndex(entries=entries, paragraph_ids=paragraph_ids)


_VIA_RANK = {"exact": 0, "normalized-exact": 1, "fuzzy": 2}


def link(
    mention: str,
    index: LinkIndex,
    k: int = DEFAULT_TOP_K,
    threshold: float = DEFAULT_THRESHOLD,
) -> List[LinkCandidate]:
    """Ranked candidates for one mention (at most k, none below threshold)."""
    norm = normalize(mention)
    mention_grams = trigrams(norm)
    candidates: List[LinkCandidate] = []
    for entry in index.entries:
        if mention == entry.name:
            candidates.append(LinkCandidate(entry.node_id, entry.name, 1.0, "exact"))
            continue
        if norm and norm in entry.forms:
            candidates.append(LinkCandidate(entry.node_id, entry.name, 1.0, "normalized-exact"))
            continue
        score = max((dice(mention_grams, grams) for grams in entry.form_trigrams), default=0.0)
        if score >= threshold:
            candidates.append(LinkCandidate(entry.node_id, entry.name, score, "fuzzy"))
    candidates.sort(
        key=lambda c: (-c.score, _VIA_RANK[c.matched_via], len(c.canonical_name), c.canonical_name)
    )
    return candidates[:k]


@dataclass(frozen=True)
class Resolution:
    mention: str
    best: Optional[LinkCandidate]
    ambiguous: bool = False


def resolve_all(
    mentions: Sequence[str],
    index: LinkIndex,
    threshold: float = DEFAULT_THRESHOLD,
    k: int = DEFAULT_TOP_K,
) -> Dict[str, Resolution]:
    """Best candidate per mention; unresolved mentions map to best=None.

    The ambiguity flag is set when the two top scores sit within 0.05 of
    each other. Paragraph-shaped mentions resolve by exact paragraph id.
    """
    resolutions: Dict[str, Resolution] = {}
    for mention in mentions:
        if mention in resolutions:
            continue
        stripped = mention.strip()
        if PARAGRAPH_MENTION.match(stripped):
            if stripped in index.paragraph_ids:
                candidate = LinkCandidate(stripped, stripped, 1.0, "exact")
                resolutions[mention] = Resolution(mention, candidate)
            else:
                resolutions[mention] = Resolution(mention, None)
            continue
        candidates = link(mention, index, k=k, threshold=threshold)
        if not candidates:
            resolutions[mention] = Resolution(mention, None)
        else:
            ambiguous = (
                len(candidates) >= 2
                and candidates[0].score - candidates[1].score < AMBIGUITY_GAP
            )
            resolutions[mention] = Resolution(mention, candidates[0], ambiguous)
    return resolutions
