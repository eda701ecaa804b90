"""Configuration files: synthetic-corpus generation and service settings.

Both use plain INI key-value files (configparser, no interpolation) so
operators can edit them without tooling. The relationship-type taxonomy
for generated corpora is deliberately configuration data, not code.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from .errors import ConfigError

LabelCombo = Tuple[str, ...]


@dataclass
class SyntheticConfig:
    node_total: int
    relationship_total: int
    property_total: int
    seed: int = 0
    # label combo -> weight; the reserved combo ("Paragraph",) sets the
    # share of paragraph nodes
    label_weights: Dict[LabelCombo, float] = field(default_factory=dict)
    # (type, category, weight)
    relationship_types: List[Tuple[str, str, float]] = field(default_factory=list)
    # entities guaranteed to exist, inserted first
    anchors: List[Tuple[str, LabelCombo]] = field(default_factory=list)
    # guaranteed number of edges between the first two anchors
    anchor_pair_edges: int = 0

    def validate(self) -> "SyntheticConfig":
        for value in (self.node_total, self.relationship_total, self.property_total):
            if value < 0:
                raise ConfigError("targets must be non-negative")
        for combo, weight in self.label_weights.items():
            if weight <= 0:
                raise ConfigError(f"label weight for {'+'.join(combo)} must be positive")
        for rel_type, _, weight in self.relationship_types:
            if weight <= 0:
                raise ConfigError(f"weight for relationship type {rel_type!r} must be positive")
        return self


def _parse_combo(raw: str) -> LabelCombo:
    labels = tuple(part.strip() for part in raw.split("+") if part.strip())
    if not labels:
        raise ConfigError(f"empty label combination: {raw!r}")
    return labels


def parse_synthetic_config(path: Union[str, Path], seed: Optional[int] = None) -> SyntheticConfig:
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str  # label/type names are case-sensitive
    read = parser.read(str(path), encoding="utf-8")
    if not read:
        raise ConfigError(f"cannot read config file: {path}")
    try:
        targets = parser["targets"]
        config = SyntheticConfig(
            node_total=targets.getint("nodes"),
            relationship_total=targets.getint("relationships"),
            property_total=targets.getint("properties"),
            seed=seed if seed is not None else targets.getint("seed", fallback=0),
        )
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"invalid [targets] section: {exc}") from exc

    if parser.has_section("labels"):
        for key, raw in parser.items("labels"):
            try:
                config.label_weights[_parse_combo(key)] = float(raw)
            except ValueError as exc:
                raise ConfigError(f"bad label weight {key} = {raw!r}") from exc

    if parser.has_section("relationship_types"):
        for key, raw in parser.items("relationship_types"):
            parts = [p.strip() for p in raw.split(",")]
            if len(parts) != 2:
                raise ConfigError(
                    f"relationship type {key!r} must be '<category>, <weight>', got {raw!r}"
                )
            try:
                config.relationship_types.append((key, parts[0], float(parts[1])))
            except ValueError as exc:
                raise ConfigError(f"bad weight for relationship type {key!r}") from exc

    if parser.has_section("anchors"):
        names = parser.get("anchors", "names", fallback="")
        for chunk in names.split(","):
            chunk = chunk.strip()
            if not chunk:
                continue
            if ":" not in chunk:
                raise ConfigError(f"anchor {chunk!r} must be '<name>:<Label+Label>'")
            name, combo = chunk.rsplit(":", 1)
            config.anchors.append((name.strip(), _parse_combo(combo)))
        config.anchor_pair_edges = parser.getint("anchors", "pair_edges", fallback=0)

    return config.validate()


# ---------------------------------------------------------------------------
# Service configuration
# ---------------------------------------------------------------------------

@dataclass
class LinkerSettings:
    threshold: float = 0.55
    top_k: int = 5
    honorifics: Tuple[str, ...] = ("fray", "don", "doña", "fr.")


@dataclass
class LlmSettings:
    mode: str = "mock"  # "mock" | "http"
    fixtures_path: Optional[str] = None
    url: Optional[str] = None
    model: Optional[str] = None
    api_key_env: Optional[str] = None
    timeout_seconds: float = 30.0
    max_concurrent: int = 4


@dataclass
class Limits:
    max_bindings: int = 1_000_000
    subgraph_node_cap: int = 2_000
    summary_row_budget: int = 100


@dataclass
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8000
    graph_document: Optional[str] = None
    static_path: Optional[str] = None
    llm: LlmSettings = field(default_factory=LlmSettings)
    linker: LinkerSettings = field(default_factory=LinkerSettings)
    limits: Limits = field(default_factory=Limits)

    def validate(self) -> "ServiceConfig":
        if self.llm.mode not in ("mock", "http"):
            raise ConfigError(f"llm mode must be 'mock' or 'http', got {self.llm.mode!r}")
        if self.llm.mode == "mock" and not self.llm.fixtures_path:
            raise ConfigError("mock backend needs llm.fixtures")
        if self.llm.mode == "http" and not self.llm.url:
            raise ConfigError("http backend needs llm.url")
        if self.llm.mode == "http" and self.llm.fixtures_path:
            raise ConfigError("exactly one backend mode: drop llm.fixtures or switch mode to mock")
        if not 0.0 <= self.linker.threshold <= 1.0:
            raise ConfigError("linker threshold must be within [0, 1]")
        return self


def parse_service_config(path: Union[str, Path]) -> ServiceConfig:
    parser = configparser.ConfigParser(interpolation=None)
    read = parser.read(str(path), encoding="utf-8")
    if not read:
        raise ConfigError(f"cannot read config file: {path}")
    config = ServiceConfig()
    if parser.has_section("server"):
        config.host = parser.get("server", "host", fallback=config.host)
        config.port = parser.getint("server", "port", fallback=config.port)
        config.static_path = parser.get("server", "static_path", fallback=None)
    if parser.has_section("graph"):
        config.graph_document = parser.get("graph", "document", fallback=None)
    if parser.has_section("llm"):
        llm = parser["llm"]
        config.llm = LlmSettings(
            mode=llm.get("mode", "mock"),
            fixtures_path=llm.get("fixtures", fallback=None),
            url=llm.get("url", fallback=None),
            model=llm.get("model", fallback=None),
            api_key_env=llm.get("api_key_env", fallback=None),
            timeout_seconds=llm.getfloat("timeout_seconds", fallback=30.0),
            max_concurrent=llm.getint("max_concurrent", fallback=4),
        )
    if parser.has_section("linker"):
        linker = parser["linker"]
        honorifics = tuple(
            part.strip()
            for part in linker.get("honorifics", "fray, don, doña, fr.").split(",")
            if part.strip()
        )
        config.linker = LinkerSettings(
            threshold=linker.getfloat("threshold", fallback=0.55),
            top_k=linker.getint("top_k", fallback=5),
            honorifics=honorifics,
        )
    if parser.has_section("limits"):
        limits = parser["limits"]
        config.limits = Limits(
            max_bindings=limits.getint("max_bindings", fallback=1_000_000),
            subgraph_node_cap=limits.getint("subgraph_node_cap", fallback=2_000),
            summary_row_budget=limits.getint("summary_row_budget", fallback=100),
        )
    return config.validate()
