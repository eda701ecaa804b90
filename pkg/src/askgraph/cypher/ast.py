"""AST for the supported Cypher subset.

All nodes are frozen dataclasses so structural equality works out of the
box; the parse -> pretty_print -> parse round-trip law is checked with
plain ==. Property maps are stored as ordered key/value pairs to keep
equality faithful to the written query.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple, Union


# -- value expressions -------------------------------------------------------

@dataclass(frozen=True)
class Literal:
    value: Union[str, int, float, bool, None]


@dataclass(frozen=True)
class ListLiteral:
    items: Tuple[Literal, ...]


@dataclass(frozen=True)
class Variable:
    name: str


@dataclass(frozen=True)
class PropertyAccess:
    variable: str
    key: str


ValueExpr = Union[Literal, Variable, PropertyAccess]


# -- boolean expressions -----------------------------------------------------

@dataclass(frozen=True)
class Comparison:
    op: str  # = <> < <= > >= CONTAINS STARTS WITH ENDS WITH IN
    lhs: ValueExpr
    rhs: Union[ValueExpr, ListLiteral]


@dataclass(frozen=True)
class LabelPredicate:
    variable: str
    label: str


@dataclass(frozen=True)
class And:
    left: "BooleanExpr"
    right: "BooleanExpr"


@dataclass(frozen=True)
class Or:
    left: "BooleanExpr"
    right: "BooleanExpr"


@dataclass(frozen=True)
class Not:
    operand: "BooleanExpr"


BooleanExpr = Union[Comparison, LabelPredicate, And, Or, Not]


# -- patterns ----------------------------------------------------------------

@dataclass(frozen=True)
class NodePattern:
    variable: Optional[str] = None
    labels: Tuple[str, ...] = ()
    properties: Tuple[Tuple[str, Literal], ...] = ()


@dataclass(frozen=True)
class RelPattern:
    variable: Optional[str] = None
    types: Tuple[str, ...] = ()
    direction: str = "undirected"  # right: ->, left: <-, undirected: --


@dataclass(frozen=True)
class Pattern:
    """Alternating node/rel sequence; odd length, node patterns at both ends."""

    elements: Tuple[Union[NodePattern, RelPattern], ...]

    def node_patterns(self) -> Tuple[NodePattern, ...]:
        return tuple(e for e in self.elements if isinstance(e, NodePattern))

    def rel_patterns(self) -> Tuple[RelPattern, ...]:
        return tuple(e for e in self.elements if isinstance(e, RelPattern))


# -- return / order ----------------------------------------------------------

@dataclass(frozen=True)
class CountAll:
    """count(*)"""


@dataclass(frozen=True)
class CountExpr:
    operand: Union[Variable, PropertyAccess]
    distinct: bool = False


ReturnExpr = Union[Variable, PropertyAccess, CountAll, CountExpr]


@dataclass(frozen=True)
class ReturnItem:
    expression: ReturnExpr
    alias: Optional[str] = None


@dataclass(frozen=True)
class OrderItem:
    expression: ReturnExpr
    ascending: bool = True


@dataclass(frozen=True)
class QueryAst:
    patterns: Tuple[Pattern, ...]
    return_items: Tuple[ReturnItem, ...]
    where: Optional[BooleanExpr] = None
    distinct: bool = False
    order_by: Tuple[OrderItem, ...] = ()
    skip: Optional[int] = None
    limit: Optional[int] = None

    def bound_variables(self) -> Tuple[str, ...]:
        """Variables bound by the patterns, in first-appearance order."""
        seen = {}
        for pattern in self.patterns:
            for element in pattern.elements:
                if element.variable and element.variable not in seen:
                    seen[element.variable] = None
        return tuple(seen)


def is_aggregate(expr: ReturnExpr) -> bool:
    return isinstance(expr, (CountAll, CountExpr))


def has_aggregates(ast: QueryAst) -> bool:
    return any(is_aggregate(item.expression) for item in ast.return_items)


def expression_variables(expr) -> Tuple[str, ...]:
    """Variables referenced by a value or boolean expression."""
    if isinstance(expr, Variable):
        return (expr.name,)
    if isinstance(expr, PropertyAccess):
        return (expr.variable,)
    if isinstance(expr, Comparison):
        return expression_variables(expr.lhs) + expression_variables(expr.rhs)
    if isinstance(expr, LabelPredicate):
        return (expr.variable,)
    if isinstance(expr, (And, Or)):
        return expression_variables(expr.left) + expression_variables(expr.right)
    if isinstance(expr, Not):
        return expression_variables(expr.operand)
    if isinstance(expr, CountExpr):
        return expression_variables(expr.operand)
    return ()
