"""Independent brute-force reference interpreter for the query subset.

Deliberately shares no execution, grouping or ordering code with the
engine. It consumes the same AST dataclasses and the same PropertyGraph
store, but enumerates candidate assignments blindly: every node slot is
tried against every node, every relationship slot against every
relationship (in id order), with constraint checks applied as soon as
their operands are assigned. Visiting slots in pattern order and elements
in id order keeps its enumeration order comparable to the engine's, so
SKIP/LIMIT windows over tied ORDER BY keys agree as well.
"""

from __future__ import annotations

from askgraph.cypher.ast import (
    And,
    Comparison,
    CountAll,
    CountExpr,
    LabelPredicate,
    Literal,
    NodePattern,
    Not,
    Or,
    PropertyAccess,
    Variable,
)
from askgraph.graph import EntityNode, ParagraphNode, Relationship


def ref_property(element, key):
    """Property lookup including the structural pseudo-properties."""
    if isinstance(element, EntityNode):
        if key == "name":
            return element.name
        if key == "id":
            return element.id
        return element.properties.get(key)
    if isinstance(element, ParagraphNode):
        if key == "text":
            return element.text
        if key == "id":
            return element.id
        return element.metadata.get(key)
    structural = {
        "type": element.rel_type,
        "category": element.category or None,
        "sentence": element.sentence or None,
        "paragraph_id": element.paragraph_id,
        "id": element.id,
    }
    if key in structural:
        return structural[key]
    return element.properties.get(key)


def ref_labels(element):
    if isinstance(element, ParagraphNode):
        return ("Paragraph",)
    return element.labels


def ref_tag(value):
    """Canonical hashable encoding; prefixes sort in the documented type
    rank (null < bool < number < text < node < relationship)."""
    if value is None:
        return ("0null",)
    if isinstance(value, bool):
        return ("1bool", value)
    if isinstance(value, (int, float)):
        return ("2num", float(value))
    if isinstance(value, str):
        return ("3str", value)
    if isinstance(value, Relationship):
        return ("5rel", value.id)
    return ("4node", value.id)


def ref_equal(a, b):
    if a is None or b is None:
        return False
    return ref_tag(a) == ref_tag(b)


def ref_less(a, b):
    """True/False when comparable, None when not."""
    if a is None or b is None:
        return None
    if isinstance(a, bool) and isinstance(b, bool):
        return a < b
    if isinstance(a, bool) or isinstance(b, bool):
        return None
    if isinstance(a, (int, float)) and isinstance(b, (int, float)):
        return a < b
    if isinstance(a, str) and isinstance(b, str):
        return a < b
    return None


def _eval_operand(operand, env):
    if isinstance(operand, Literal):
        return operand.value
    if isinstance(operand, Variable):
        return env.get(operand.name)
    if isinstance(operand, PropertyAccess):
        element = env.get(operand.variable)
        return None if element is None else ref_property(element, operand.key)
    raise TypeError(operand)


def _eval_predicate(expr, env):
    if isinstance(expr, And):
        return _eval_predicate(expr.left, env) and _eval_predicate(expr.right, env)
    if isinstance(expr, Or):
        return _eval_predicate(expr.left, env) or _eval_predicate(expr.right, env)
    if isinstance(expr, Not):
        return not _eval_predicate(expr.operand, env)
    if isinstance(expr, LabelPredicate):
        element = env.get(expr.variable)
        if element is None or isinstance(element, Relationship):
            return False
        return expr.label in ref_labels(element)
    if isinstance(expr, Comparison):
        left = _eval_operand(expr.lhs, env)
        if expr.op == "IN":
            return any(ref_equal(left, item.value) for item in expr.rhs.items)
        right = _eval_operand(expr.rhs, env)
        if expr.op == "=":
            return ref_equal(left, right)
        if expr.op == "<>":
            return left is not None and right is not None and not ref_equal(left, right)
        if expr.op == "<":
            return ref_less(left, right) is True
        if expr.op == ">":
            return ref_less(right, left) is True
        if expr.op == "<=":
            return ref_less(right, left) is False
        if expr.op == ">=":
            return ref_less(left, right) is False
        if expr.op in ("CONTAINS", "STARTS WITH", "ENDS WITH"):
            if not isinstance(left, str) or not isinstance(right, str):
                return False
            if expr.op == "CONTAINS":
                return right in left
            if expr.op == "STARTS WITH":
                return left.startswith(right)
            return left.endswith(right)
    raise TypeError(expr)


def _node_ok(node, node_pattern):
    if isinstance(node, Relationship):
        return False
    have = ref_labels(node)
    if any(label not in have for label in node_pattern.labels):
        return False
    for key, literal in node_pattern.properties:
        if literal.value is None:
            return False
        if not ref_equal(ref_property(node, key), literal.value):
            return False
    return True


def _touches(rel_pattern, left_node, rel):
    if rel_pattern.direction == "right":
        return rel.source == left_node.id
    if rel_pattern.direction == "left":
        return rel.target == left_node.id
    return left_node.id in (rel.source, rel.target)


def _joins(rel_pattern, left_node, rel, right_node):
    forward = rel.source == left_node.id and rel.target == right_node.id
    backward = rel.target == left_node.id and rel.source == right_node.id
    if rel_pattern.direction == "right":
        return forward
    if rel_pattern.direction == "left":
        return backward
    return forward or backward


def enumerate_matches(ast, graph):
    """All assignments of the whole MATCH clause, as env dicts, in
    deterministic depth-first order."""
    all_nodes = graph.nodes()
    all_rels = graph.relationships()

    def expand(elements, idx, env, used, prev_node, pending_rel, out):
        if idx == len(elements):
            out.append((env, used))
            return
        element = elements[idx]
        if isinstance(element, NodePattern):
            name = element.variable
            options = [env[name]] if name is not None and name in env else all_nodes
            for node in options:
                if not _node_ok(node, element):
                    continue
                if pending_rel is not None and not _joins(
                    elements[idx - 1], prev_node, pending_rel, node
                ):
                    continue
                nxt = dict(env)
                if name is not None:
                    nxt[name] = node
                expand(elements, idx + 1, nxt, used, node, None, out)
        else:
            name = element.variable
            for rel in all_rels:
                if rel.id in used:
                    continue
                if element.types and rel.rel_type not in element.types:
                    continue
                if name is not None and name in env:
                    bound = env[name]
                    if not isinstance(bound, Relationship) or bound.id != rel.id:
                        continue
                if not _touches(element, prev_node, rel):
                    continue
                nxt = dict(env)
                if name is not None:
                    nxt[name] = rel
                expand(elements, idx + 1, nxt, used + (rel.id,), prev_node, rel, out)

    assignments = [({}, ())]
    for pattern in ast.patterns:
        grown = []
        for env, used in assignments:
            expand(pattern.elements, 0, env, used, None, None, grown)
        assignments = grown
    return [env for env, _ in assignments]


def oracle_execute(ast, graph):
    """Result rows per the documented subset semantics."""
    envs = enumerate_matches(ast, graph)
    if ast.where is not None:
        envs = [env for env in envs if _eval_predicate(ast.where, env)]

    items = list(ast.return_items)
    aggregate_flags = [isinstance(i.expression, (CountAll, CountExpr)) for i in items]
    any_aggregate = any(aggregate_flags)

    if not any_aggregate:
        rows = [tuple(_eval_operand(i.expression, env) for i in items) for env in envs]
        row_envs = list(envs)
        if ast.distinct:
            seen = set()
            unique_rows, unique_envs = [], []
            for row, env in zip(rows, row_envs):
                key = tuple(ref_tag(v) for v in row)
                if key not in seen:
                    seen.add(key)
                    unique_rows.append(row)
                    unique_envs.append(None)  # env-based ordering is rejected here
            rows, row_envs = unique_rows, unique_envs
    else:
        buckets = {}
        bucket_order = []
        key_idx = [i for i, flag in enumerate(aggregate_flags) if not flag]
        for env in envs:
            values = [_eval_operand(items[i].expression, env) for i in key_idx]
            key = tuple(ref_tag(v) for v in values)
            if key not in buckets:
                buckets[key] = (values, [])
                bucket_order.append(key)
            buckets[key][1].append(env)
        if not key_idx and not envs:
            buckets[()] = ([], [])
            bucket_order.append(())
        rows, row_envs = [], []
        for key in bucket_order:
            values, members = buckets[key]
            row = []
            value_iter = iter(values)
            for item in items:
                expr = item.expression
                if isinstance(expr, CountAll):
                    row.append(len(members))
                elif isinstance(expr, CountExpr):
                    collected = [_eval_operand(expr.operand, env) for env in members]
                    collected = [v for v in collected if v is not None]
                    if expr.distinct:
                        row.append(len({ref_tag(v) for v in collected}))
                    else:
                        row.append(len(collected))
                else:
                    row.append(next(value_iter))
            rows.append(tuple(row))
            row_envs.append(None)

    if ast.order_by:
        alias_to_index = {i.alias: n for n, i in enumerate(items) if i.alias}
        expr_to_index = {i.expression: n for n, i in enumerate(items)}

        def sort_tag(row, env, order):
            expr = order.expression
            if isinstance(expr, Variable) and expr.name in alias_to_index:
                return ref_tag(row[alias_to_index[expr.name]])
            if expr in expr_to_index:
                return ref_tag(row[expr_to_index[expr]])
            if env is None:
                raise LookupError("oracle only orders by projected expressions here")
            return ref_tag(_eval_operand(expr, env))

        decorated = [
            ([sort_tag(row, env, order) for order in ast.order_by], row)
            for row, env in zip(rows, row_envs)
        ]
        for position in range(len(ast.order_by) - 1, -1, -1):
            decorated.sort(
                key=lambda entry: entry[0][position],
                reverse=not ast.order_by[position].ascending,
            )
        rows = [row for _, row in decorated]

    if ast.skip is not None:
        rows = rows[ast.skip:]
    if ast.limit is not None:
        rows = rows[: ast.limit]
    return rows
