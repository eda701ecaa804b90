"""Executor for the Cypher subset over a finalized PropertyGraph.

Semantics in one place (docs/grammar.md restates them for users):

* Pattern matching is a homomorphism from pattern variables to graph
  elements: distinct variables may bind the same node, but no relationship
  is bound twice within one match of the whole MATCH clause (anonymous
  relationship slots count too).
* Undirected relationship patterns match either orientation.
* WHERE uses two-valued logic: any comparison involving a missing property
  or NULL is false, and so is any type-mismatched comparison. This is a
  documented divergence from openCypher's ternary null logic.
* Aggregation follows the openCypher convention: implicit grouping keys
  are all non-aggregated return items. A RETURN consisting solely of
  aggregates produces exactly one row, even over zero matches.
* ORDER BY sorts with the type rank null < boolean < number < text
  (< node < relationship, both by id); ties keep the engine's canonical
  enumeration order, which visits elements in id order. SKIP applies
  before LIMIT.
* The result subgraph contains every node and relationship bound by any
  match that contributed to a surviving row.

Enumeration walks adjacency lists node-by-node; candidate bindings are
counted and capped (ResourceLimit) to keep cross products at desk scale.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cmp_to_key
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from ..errors import QueryError, ResourceLimit, UnboundVariable
from ..graph import (
    EntityNode,
    Node,
    ParagraphNode,
    PropertyGraph,
    Relationship,
    ResultSubgraph,
    node_labels,
    property_value,
    subgraph_of,
)
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
    has_aggregates,
    is_aggregate,
)
from .printer import format_return_expr
from .validator import unbound_variables

DEFAULT_BINDING_CAP = 1_000_000

Value = Union[None, bool, int, float, str, Node, Relationship]
Element = Union[Node, Relationship]


@dataclass
class QueryResult:
    columns: List[str]
    rows: List[Tuple[Value, ...]]
    subgraph: ResultSubgraph


@dataclass
class _Context:
    env: Dict[str, Element] = field(default_factory=dict)
    node_ids: Tuple[str, ...] = ()
    rel_ids: Tuple[str, ...] = ()

    def extended(self, variable: Optional[str], element: Element) -> "_Context":
        env = self.env
        if variable is not None:
            env = dict(env)
            env[variable] = element
        if isinstance(element, Relationship):
            return _Context(env, self.node_ids, self.rel_ids + (element.id,))
        return _Context(env, self.node_ids + (element.id,), self.rel_ids)


# -- value semantics ----------------------------------------------------------


def canonical_value(value: Value):
    """Hashable identity used for grouping, DISTINCT and count(DISTINCT).

    Booleans are tagged apart from numbers (Python would conflate True
    and 1); ints and floats unify, matching `1 = 1.0` being true.
    """
    if value is None:
        return ("null",)
    if isinstance(value, bool):
        return ("bool", value)
    if isinstance(value, (int, float)):
        return ("num", float(value))
    if isinstance(value, str):
        return ("str", value)
    if isinstance(value, Relationship):
        return ("rel", value.id)
    return ("node", value.id)


_SORT_RANK = {"null": 0, "bool": 1, "num": 2, "str": 3, "node": 4, "rel": 5}


def sort_key(value: Value) -> Tuple:
    tag = canonical_value(value)
    return (_SORT_RANK[tag[0]],) + tuple(tag[1:])


def values_equal(a: Value, b: Value) -> bool:
    if a is None or b is None:
        return False
    if isinstance(a, bool) or isinstance(b, bool):
        return isinstance(a, bool) and isinstance(b, bool) and a == b
    if isinstance(a, (int, float)) and isinstance(b, (int, float)):
        return float(a) == float(b)
    if isinstance(a, str) and isinstance(b, str):
        return a == b
    if isinstance(a, (EntityNode, ParagraphNode, Relationship)) or isinstance(
        b, (EntityNode, ParagraphNode, Relationship)
    ):
        return type(a) is type(b) and a.id == b.id  # type: ignore[union-attr]
    return False


def values_ordered(op: str, a: Value, b: Value) -> bool:
    """< <= > >= with two-valued logic; incomparable pairs are false."""
    if a is None or b is None:
        return False
    if isinstance(a, bool) and isinstance(b, bool):
        pass
    elif isinstance(a, bool) or isinstance(b, bool):
        return False
    elif isinstance(a, (int, float)) and isinstance(b, (int, float)):
        pass
    elif isinstance(a, str) and isinstance(b, str):
        pass
    else:
        return False
    if op == "<":
        return a < b
    if op == "<=":
        return a <= b
    if op == ">":
        return a > b
    return a >= b


# -- pattern matching -----------------------------------------------------------


def _node_satisfies(node: Element, np: NodePattern) -> bool:
    if isinstance(node, Relationship):
        return False
    labels = node_labels(node)
    for label in np.labels:
        if label not in labels:
            return False
    for key, literal in np.properties:
        if literal.value is None:
            return False  # {key: NULL} matches nothing
        if not values_equal(property_value(node, key), literal.value):
            return False
    return True


def _rel_satisfies(rel: Relationship, rp: RelPattern) -> bool:
    return not rp.types or rel.rel_type in rp.types


class _Matcher:
    def __init__(self, graph: PropertyGraph, cap: int):
        self.graph = graph
        self.cap = cap
        self.count = 0

    def _tick(self) -> None:
        self.count += 1
        if self.count > self.cap:
            raise ResourceLimit(self.cap)

    def match_clause(self, patterns: Sequence[Pattern]) -> List[_Context]:
        contexts = [_Context()]
        for pattern in patterns:
            next_contexts: List[_Context] = []
            for ctx in contexts:
                next_contexts.extend(self.match_pattern(pattern, ctx))
            contexts = next_contexts
        return contexts

    def match_pattern(self, pattern: Pattern, ctx: _Context) -> Iterable[_Context]:
        first = pattern.elements[0]
        assert isinstance(first, NodePattern)
        for start_ctx, start_node in self._node_candidates(first, ctx):
            yield from self._extend(pattern.elements, 1, start_ctx, start_node)

    def _node_candidates(
        self, np: NodePattern, ctx: _Context
    ) -> Iterable[Tuple[_Context, Node]]:
        if np.variable is not None and np.variable in ctx.env:
            bound = ctx.env[np.variable]
            if _node_satisfies(bound, np):
                self._tick()
                yield ctx.extended(None, bound), bound  # already in env; record id
            return
        for node in self.graph.nodes():
            if _node_satisfies(node, np):
                self._tick()
                yield ctx.extended(np.variable, node), node

    def _extend(
        self,
        elements: Sequence[Union[NodePattern, RelPattern]],
        index: int,
        ctx: _Context,
        current: Node,
    ) -> Iterable[_Context]:
        if index >= len(elements):
            yield ctx
            return
        rp = elements[index]
        np = elements[index + 1]
        assert isinstance(rp, RelPattern) and isinstance(np, NodePattern)
        direction = {"right": "outgoing", "left": "incoming", "undirected": "both"}[rp.direction]
        for rel, other in self.graph.neighbors(current.id, direction=direction):
            if not _rel_satisfies(rel, rp):
                continue
            if rel.id in ctx.rel_ids:
                continue  # relationship uniqueness within the MATCH clause
            if rp.variable is not None and rp.variable in ctx.env:
                bound = ctx.env[rp.variable]
                if not (isinstance(bound, Relationship) and bound.id == rel.id):
                    continue
            rel_ctx = ctx.extended(rp.variable, rel)
            self._tick()
            if np.variable is not None and np.variable in rel_ctx.env:
                bound = rel_ctx.env[np.variable]
                if isinstance(bound, Relationship) or bound.id != other.id:
                    continue
                if not _node_satisfies(other, np):
                    continue
                next_ctx = rel_ctx.extended(None, other)
            else:
                if not _node_satisfies(other, np):
                    continue
                next_ctx = rel_ctx.extended(np.variable, other)
            self._tick()
            yield from self._extend(elements, index + 2, next_ctx, other)


# -- expression evaluation ---------------------------------------------------------


def _eval_value(expr, ctx: _Context) -> Value:
    if isinstance(expr, Literal):
        return expr.value
    if isinstance(expr, Variable):
        return ctx.env.get(expr.name)
    if isinstance(expr, PropertyAccess):
        element = ctx.env.get(expr.variable)
        if element is None:
            return None
        return property_value(element, expr.key)
    raise TypeError(f"not a value expression: {expr!r}")


def _eval_bool(expr, ctx: _Context) -> bool:
    if isinstance(expr, And):
        return _eval_bool(expr.left, ctx) and _eval_bool(expr.right, ctx)
    if isinstance(expr, Or):
        return _eval_bool(expr.left, ctx) or _eval_bool(expr.right, ctx)
    if isinstance(expr, Not):
        return not _eval_bool(expr.operand, ctx)
    if isinstance(expr, LabelPredicate):
        element = ctx.env.get(expr.variable)
        if element is None or isinstance(element, Relationship):
            return False
        return expr.label in node_labels(element)
    if isinstance(expr, Comparison):
        lhs = _eval_value(expr.lhs, ctx)
        if expr.op == "IN":
            assert isinstance(expr.rhs, ListLiteral)
            return any(values_equal(lhs, item.value) for item in expr.rhs.items)
        rhs = _eval_value(expr.rhs, ctx)
        if expr.op == "=":
            return values_equal(lhs, rhs)
        if expr.op == "<>":
            if lhs is None or rhs is None:
                return False
            return not values_equal(lhs, rhs)
        if expr.op in ("<", "<=", ">", ">="):
            return values_ordered(expr.op, lhs, rhs)
        if expr.op in ("CONTAINS", "STARTS WITH", "ENDS WITH"):
            if not isinstance(lhs, str) or not isinstance(rhs, str):
                return False
            if expr.op == "CONTAINS":
                return rhs in lhs
            if expr.op == "STARTS WITH":
                return lhs.startswith(rhs)
            return lhs.endswith(rhs)
    raise TypeError(f"not a boolean expression: {expr!r}")


# -- projection ----------------------------------------------------------------------


def _project(
    ast: QueryAst, contexts: List[_Context]
) -> List[Tuple[Tuple[Value, ...], List[_Context]]]:
    """Rows paired with the contexts that produced them (for the subgraph)."""
    exprs = [item.expression for item in ast.return_items]

    if not has_aggregates(ast):
        rows: List[Tuple[Tuple[Value, ...], List[_Context]]] = []
        if ast.distinct:
            index: Dict[Tuple, int] = {}
            for ctx in contexts:
                row = tuple(_eval_value(e, ctx) for e in exprs)
                key = tuple(canonical_value(v) for v in row)
                if key in index:
                    rows[index[key]][1].append(ctx)
                else:
                    index[key] = len(rows)
                    rows.append((row, [ctx]))
        else:
            rows = [(tuple(_eval_value(e, ctx) for e in exprs), [ctx]) for ctx in contexts]
        return rows

    key_positions = [i for i, e in enumerate(exprs) if not is_aggregate(e)]
    groups: Dict[Tuple, Tuple[List[Value], List[_Context]]] = {}
    order: List[Tuple] = []
    for ctx in contexts:
        key_values = [_eval_value(exprs[i], ctx) for i in key_positions]
        key = tuple(canonical_value(v) for v in key_values)
        if key not in groups:
            groups[key] = (key_values, [])
            order.append(key)
        groups[key][1].append(ctx)
    if not key_positions and not contexts:
        groups[()] = ([], [])
        order.append(())

    rows = []
    for key in order:
        key_values, group_ctxs = groups[key]
        row: List[Value] = []
        key_iter = iter(key_values)
        for expr in exprs:
            if isinstance(expr, CountAll):
                row.append(len(group_ctxs))
            elif isinstance(expr, CountExpr):
                values = (_eval_value(expr.operand, c) for c in group_ctxs)
                non_null = [v for v in values if v is not None]
                if expr.distinct:
                    row.append(len({canonical_value(v) for v in non_null}))
                else:
                    row.append(len(non_null))
            else:
                row.append(next(key_iter))
        rows.append((tuple(row), group_ctxs))
    return rows


def _order_rows(
    ast: QueryAst,
    rows: List[Tuple[Tuple[Value, ...], List[_Context]]],
) -> List[Tuple[Tuple[Value, ...], List[_Context]]]:
    if not ast.order_by:
        return rows

    aliases = {item.alias: i for i, item in enumerate(ast.return_items) if item.alias}
    exprs = {item.expression: i for i, item in enumerate(ast.return_items)}
    aggregated = has_aggregates(ast)

    def resolve(order_expr, row: Tuple[Value, ...], ctxs: List[_Context]) -> Value:
        if isinstance(order_expr, Variable) and order_expr.name in aliases:
            return row[aliases[order_expr.name]]
        if order_expr in exprs:
            return row[exprs[order_expr]]
        if aggregated or ast.distinct:
            raise QueryError(
                "ORDER BY expressions must appear in RETURN when the query "
                f"aggregates or uses DISTINCT: {format_return_expr(order_expr)}"
            )
        return _eval_value(order_expr, ctxs[0])

    keyed = [
        (tuple(sort_key(resolve(o.expression, row, ctxs)) for o in ast.order_by), row, ctxs)
        for row, ctxs in rows
    ]

    directions = [o.ascending for o in ast.order_by]

    def compare(a, b) -> int:
        for ka, kb, ascending in zip(a[0], b[0], directions):
            if ka == kb:
                continue
            less = ka < kb
            if ascending:
                return -1 if less else 1
            return 1 if less else -1
        return 0

    keyed.sort(key=cmp_to_key(compare))
    return [(row, ctxs) for _, row, ctxs in keyed]


def execute(
    ast: QueryAst,
    graph: PropertyGraph,
    max_bindings: int = DEFAULT_BINDING_CAP,
) -> QueryResult:
    unbound = unbound_variables(ast)
    if unbound:
        raise UnboundVariable(unbound[0])

    matcher = _Matcher(graph, max_bindings)
    contexts = matcher.match_clause(ast.patterns)
    if ast.where is not None:
        contexts = [ctx for ctx in contexts if _eval_bool(ast.where, ctx)]

    rows = _project(ast, contexts)
    rows = _order_rows(ast, rows)
    if ast.skip is not None:
        rows = rows[ast.skip:]
    if ast.limit is not None:
        rows = rows[: ast.limit]

    node_ids: List[str] = []
    rel_ids: List[str] = []
    for _, ctxs in rows:
        for ctx in ctxs:
            node_ids.extend(ctx.node_ids)
            rel_ids.extend(ctx.rel_ids)

    columns = [item.alias or format_return_expr(item.expression) for item in ast.return_items]
    return QueryResult(
        columns=columns,
        rows=[row for row, _ in rows],
        subgraph=subgraph_of(graph, node_ids, rel_ids),
    )
