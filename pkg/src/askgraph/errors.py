"""Shared exception taxonomy.

Every error the package raises deliberately derives from AskGraphError so
callers (service, CLI) can map failures onto their own status codes without
chasing bare ValueErrors.
"""


class AskGraphError(Exception):
    """Base class for all deliberate errors."""


# ---------------------------------------------------------------------------
# Graph store
# ---------------------------------------------------------------------------

class GraphError(AskGraphError):
    pass


class DuplicateId(GraphError):
    def __init__(self, element_id: str):
        super().__init__(f"duplicate id: {element_id!r}")
        self.element_id = element_id


class UnknownNode(GraphError):
    def __init__(self, node_id: str):
        super().__init__(f"unknown node: {node_id!r}")
        self.node_id = node_id


class UnknownElement(GraphError):
    def __init__(self, element_id: str):
        super().__init__(f"unknown element: {element_id!r}")
        self.element_id = element_id


class UnknownEndpoint(GraphError):
    def __init__(self, node_id: str):
        super().__init__(f"relationship endpoint does not exist: {node_id!r}")
        self.node_id = node_id


class InvariantViolation(GraphError):
    pass


class GraphFrozen(GraphError):
    """Write attempted after ingest finalization."""


class GraphNotFinalized(GraphError):
    """Read operation that requires a finalized graph."""


# ---------------------------------------------------------------------------
# Query engine
# ---------------------------------------------------------------------------

class QueryError(AskGraphError):
    pass


class LexError(QueryError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class ParseError(QueryError):
    def __init__(self, message: str, line: int, column: int, expected=()):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column
        self.expected = tuple(expected)


class UnsupportedFeature(ParseError):
    """Construct outside the supported Cypher subset."""


class UnboundVariable(QueryError):
    def __init__(self, name: str):
        super().__init__(f"variable {name!r} is not bound by any MATCH pattern")
        self.name = name


class ResourceLimit(QueryError):
    def __init__(self, cap: int):
        super().__init__(f"intermediate result cap exceeded ({cap} bindings)")
        self.cap = cap


# ---------------------------------------------------------------------------
# Ingestion
# ---------------------------------------------------------------------------

class IngestError(AskGraphError):
    pass


class SchemaViolation(IngestError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


class DanglingReference(IngestError):
    def __init__(self, element_id: str):
        super().__init__(f"reference to missing element: {element_id!r}")
        self.element_id = element_id


class MalformedRecord(IngestError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class UnachievableTargets(IngestError):
    pass


# ---------------------------------------------------------------------------
# LLM pipeline
# ---------------------------------------------------------------------------

class PipelineError(AskGraphError):
    """Raised by pipeline stages; carries the stage tag for diagnostics."""

    stage: str = "unknown"

    def with_stage(self, stage: str) -> "PipelineError":
        self.stage = stage
        return self


class BackendUnavailable(PipelineError):
    pass


class MalformedModelOutput(PipelineError):
    pass


class UngeneratableQuery(PipelineError):
    pass


# ---------------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------------

class ConfigError(AskGraphError):
    pass
