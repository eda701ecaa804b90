"""askgraph: explore relational graphs extracted from text corpora.

Natural-language questions are translated (via a pluggable LLM backend)
into a precisely defined Cypher subset, executed on an embedded property
graph, and answered with an interactive subgraph, the generated query
text, a natural-language summary, and sentence-level provenance.
"""

from .graph import (
    DistributionReport,
    EntityNode,
    GraphSchema,
    ParagraphNode,
    PropertyGraph,
    Relationship,
    ResultSubgraph,
)

__version__ = "0.1.0"

__all__ = [
    "PropertyGraph",
    "EntityNode",
    "ParagraphNode",
    "Relationship",
    "GraphSchema",
    "DistributionReport",
    "ResultSubgraph",
    "__version__",
]
