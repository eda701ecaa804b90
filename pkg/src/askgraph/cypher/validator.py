"""Static checks of a parsed query against a graph schema.

Unbound variables are errors (the executor refuses such ASTs). Labels,
relationship types and property keys that the schema has never seen are
warnings only: the query is legal, it just cannot match anything, and the
pipeline uses the warnings to steer its repair round.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Set

from ..graph import GraphSchema
from .ast import (
    And,
    Comparison,
    CountExpr,
    LabelPredicate,
    Not,
    Or,
    PropertyAccess,
    QueryAst,
    Variable,
    expression_variables,
)


@dataclass(frozen=True)
class Finding:
    severity: str  # "error" | "warning"
    code: str
    message: str
    where: str  # AST location path


@dataclass
class ValidationReport:
    findings: List[Finding] = field(default_factory=list)

    @property
    def errors(self) -> List[Finding]:
        return [f for f in self.findings if f.severity == "error"]

    @property
    def warnings(self) -> List[Finding]:
        return [f for f in self.findings if f.severity == "warning"]

    @property
    def ok(self) -> bool:
        return not self.errors

    def add(self, severity: str, code: str, message: str, where: str) -> None:
        self.findings.append(Finding(severity, code, message, where))


def unbound_variables(ast: QueryAst) -> List[str]:
    """Referenced-but-unbound variable names, in first-appearance order.

    ORDER BY may legally reference return aliases, so those do not count.
    """
    bound = set(ast.bound_variables())
    aliases = {item.alias for item in ast.return_items if item.alias}
    found: List[str] = []

    def note(name: str, extra_ok=frozenset()) -> None:
        if name not in bound and name not in extra_ok and name not in found:
            found.append(name)

    if ast.where is not None:
        for name in expression_variables(ast.where):
            note(name)
    for item in ast.return_items:
        for name in expression_variables(item.expression):
            note(name)
    for order in ast.order_by:
        expr = order.expression
        if isinstance(expr, Variable):
            note(expr.name, extra_ok=aliases)
        else:
            for name in expression_variables(expr):
                note(name)
    return found


def validate(ast: QueryAst, schema: Optional[GraphSchema] = None) -> ValidationReport:
    report = ValidationReport()
    bound: Set[str] = set(ast.bound_variables())
    known_labels = set(schema.node_labels) if schema else None
    known_types = set(schema.relationship_types) if schema else None
    known_node_keys: Set[str] = set()
    known_rel_keys: Set[str] = set()
    if schema:
        for keys in schema.node_property_keys.values():
            known_node_keys.update(keys)
        for keys in schema.relationship_property_keys.values():
            known_rel_keys.update(keys)
        # structural pseudo-properties are always addressable
        known_node_keys.update({"id", "name", "text"})
        known_rel_keys.update({"id", "type", "category", "sentence", "paragraph_id"})

    def check_label(label: str, where: str) -> None:
        if known_labels is not None and label not in known_labels:
            report.add("warning", "UnknownLabel", f"label {label!r} does not occur in the schema", where)

    def check_type(rel_type: str, where: str) -> None:
        if known_types is not None and rel_type not in known_types:
            report.add(
                "warning",
                "UnknownRelationshipType",
                f"relationship type {rel_type!r} does not occur in the schema",
                where,
            )

    def check_property_key(key: str, where: str) -> None:
        if schema and key not in known_node_keys and key not in known_rel_keys:
            report.add(
                "warning",
                "UnknownPropertyKey",
                f"property key {key!r} does not occur in the schema",
                where,
            )

    def check_variable(name: str, where: str, extra_ok: Set[str] = frozenset()) -> None:
        if name not in bound and name not in extra_ok:
            report.add("error", "UnboundVariable", f"variable {name!r} is not bound by any MATCH pattern", where)

    seen_rel_vars: Set[str] = set()
    for p_idx, pattern in enumerate(ast.patterns):
        for e_idx, element in enumerate(pattern.elements):
            where = f"patterns[{p_idx}].elements[{e_idx}]"
            if hasattr(element, "labels"):
                for label in element.labels:
                    check_label(label, where)
                for key, _ in element.properties:
                    check_property_key(key, where)
            else:
                for rel_type in element.types:
                    check_type(rel_type, where)
                if element.variable:
                    if element.variable in seen_rel_vars:
                        report.add(
                            "warning",
                            "RepeatedRelationshipVariable",
                            f"relationship variable {element.variable!r} is bound twice; "
                            "relationship uniqueness makes this unsatisfiable",
                            where,
                        )
                    seen_rel_vars.add(element.variable)

    def walk_bool(expr, where: str) -> None:
        if isinstance(expr, (And, Or)):
            walk_bool(expr.left, where + ".left")
            walk_bool(expr.right, where + ".right")
        elif isinstance(expr, Not):
            walk_bool(expr.operand, where + ".operand")
        elif isinstance(expr, LabelPredicate):
            check_variable(expr.variable, where)
            check_label(expr.label, where)
        elif isinstance(expr, Comparison):
            for side in (expr.lhs, expr.rhs):
                for name in expression_variables(side):
                    check_variable(name, where)
                if isinstance(side, PropertyAccess):
                    check_property_key(side.key, where)

    if ast.where is not None:
        walk_bool(ast.where, "where")

    aliases: Set[str] = set()
    for i_idx, item in enumerate(ast.return_items):
        where = f"return_items[{i_idx}]"
        for name in expression_variables(item.expression):
            check_variable(name, where)
        expr = item.expression
        operand = expr.operand if isinstance(expr, CountExpr) else expr
        if isinstance(operand, PropertyAccess):
            check_property_key(operand.key, where)
        if item.alias:
            aliases.add(item.alias)

    for o_idx, order in enumerate(ast.order_by):
        where = f"order_by[{o_idx}]"
        expr = order.expression
        if isinstance(expr, Variable):
            check_variable(expr.name, where, extra_ok=aliases)
        else:
            for name in expression_variables(expr):
                check_variable(name, where)

    return report
