"""Graph loading: JSON interchange, CoNLL04 adaptation, synthetic corpora."""

from .conll04 import import_conll04
from .jsondoc import (
    SCHEMA_PATH,
    document_from_graph,
    dumps_document,
    export_graph_json,
    graph_from_document,
    load_graph_json,
)
from .synthetic import generate_synthetic

__all__ = [
    "import_conll04",
    "load_graph_json",
    "export_graph_json",
    "graph_from_document",
    "document_from_graph",
    "dumps_document",
    "generate_synthetic",
    "SCHEMA_PATH",
]
