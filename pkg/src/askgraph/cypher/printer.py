"""Canonical query formatting: uppercase keywords, one clause per line.

parse(pretty_print(ast)) must equal ast structurally; the round-trip law
is enforced by tests over generated queries.
"""

from __future__ import annotations

import re

from .ast import (
    And,
    Comparison,
    CountAll,
    CountExpr,
    LabelPredicate,
    ListLiteral,
    Literal,
    NodePattern,
    Not,
    Or,
    Pattern,
    PropertyAccess,
    QueryAst,
    RelPattern,
    Variable,
)
from .lexer import KEYWORDS

_BARE_NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


def format_name(name: str) -> str:
    if _BARE_NAME.match(name) and name.upper() not in KEYWORDS:
        return name
    return "`" + name.replace("`", "``") + "`"


def format_literal(lit: Literal) -> str:
    value = lit.value
    if value is None:
        return "NULL"
    if value is True:
        return "TRUE"
    if value is False:
        return "FALSE"
    if isinstance(value, str):
        escaped = value.replace("\\", "\\\\").replace("'", "\\'")
        escaped = escaped.replace("\n", "\\n").replace("\t", "\\t").replace("\r", "\\r")
        return f"'{escaped}'"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def format_value(expr) -> str:
    if isinstance(expr, Literal):
        return format_literal(expr)
    if isinstance(expr, Variable):
        return format_name(expr.name)
    if isinstance(expr, PropertyAccess):
        return f"{format_name(expr.variable)}.{format_name(expr.key)}"
    if isinstance(expr, ListLiteral):
        return "[" + ", ".join(format_literal(i) for i in expr.items) + "]"
    raise TypeError(f"cannot format value expression {expr!r}")


# precedence: OR(1) < AND(2) < NOT(3) < atoms(4)

def _precedence(expr) -> int:
    if isinstance(expr, Or):
        return 1
    if isinstance(expr, And):
        return 2
    if isinstance(expr, Not):
        return 3
    return 4


def format_bool(expr, parent_precedence: int = 0) -> str:
    prec = _precedence(expr)
    if isinstance(expr, Or):
        text = f"{format_bool(expr.left, prec)} OR {format_bool(expr.right, prec + 1)}"
    elif isinstance(expr, And):
        text = f"{format_bool(expr.left, prec)} AND {format_bool(expr.right, prec + 1)}"
    elif isinstance(expr, Not):
        text = f"NOT {format_bool(expr.operand, prec)}"
    elif isinstance(expr, LabelPredicate):
        text = f"{format_name(expr.variable)}:{format_name(expr.label)}"
    elif isinstance(expr, Comparison):
        text = f"{format_value(expr.lhs)} {expr.op} {format_value(expr.rhs)}"
    else:
        raise TypeError(f"cannot format boolean expression {expr!r}")
    if prec < parent_precedence:
        return f"({text})"
    return text


def format_node_pattern(node: NodePattern) -> str:
    parts = []
    if node.variable:
        parts.append(format_name(node.variable))
    for label in node.labels:
        parts.append(":" + format_name(label))
    if node.properties:
        pairs = ", ".join(f"{format_name(k)}: {format_literal(v)}" for k, v in node.properties)
        parts.append((" " if parts else "") + "{" + pairs + "}")
    return "(" + "".join(parts) + ")"


def format_rel_pattern(rel: RelPattern) -> str:
    inner = ""
    if rel.variable:
        inner += format_name(rel.variable)
    if rel.types:
        inner += ":" + "|".join(format_name(t) for t in rel.types)
    body = f"[{inner}]"
    if rel.direction == "right":
        return f"-{body}->"
    if rel.direction == "left":
        return f"<-{body}-"
    return f"-{body}-"


def format_pattern(pattern: Pattern) -> str:
    out = []
    for element in pattern.elements:
        if isinstance(element, NodePattern):
            out.append(format_node_pattern(element))
        else:
            out.append(format_rel_pattern(element))
    return "".join(out)


def format_return_expr(expr) -> str:
    if isinstance(expr, CountAll):
        return "count(*)"
    if isinstance(expr, CountExpr):
        inner = format_value(expr.operand)
        if expr.distinct:
            return f"count(DISTINCT {inner})"
        return f"count({inner})"
    return format_value(expr)


def pretty_print(ast: QueryAst) -> str:
    lines = ["MATCH " + ", ".join(format_pattern(p) for p in ast.patterns)]
    if ast.where is not None:
        lines.append("WHERE " + format_bool(ast.where))
    items = []
    for item in ast.return_items:
        text = format_return_expr(item.expression)
        if item.alias:
            text += f" AS {format_name(item.alias)}"
        items.append(text)
    prefix = "RETURN DISTINCT " if ast.distinct else "RETURN "
    lines.append(prefix + ", ".join(items))
    if ast.order_by:
        rendered = []
        for order in ast.order_by:
            text = format_return_expr(order.expression)
            if not order.ascending:
                text += " DESC"
            rendered.append(text)
        lines.append("ORDER BY " + ", ".join(rendered))
    if ast.skip is not None:
        lines.append(f"SKIP {ast.skip}")
    if ast.limit is not None:
        lines.append(f"LIMIT {ast.limit}")
    return "\n".join(lines)
