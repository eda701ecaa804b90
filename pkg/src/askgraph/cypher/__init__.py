"""Cypher-subset engine: lexer, parser, validator, executor, printer."""

from .ast import QueryAst
from .executor import DEFAULT_BINDING_CAP, QueryResult, execute
from .lexer import Token, tokenize
from .parser import parse
from .printer import pretty_print
from .validator import Finding, ValidationReport, unbound_variables, validate

__all__ = [
    "QueryAst",
    "QueryResult",
    "DEFAULT_BINDING_CAP",
    "execute",
    "tokenize",
    "Token",
    "parse",
    "pretty_print",
    "validate",
    "unbound_variables",
    "ValidationReport",
    "Finding",
]
