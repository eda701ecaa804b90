"""Random graphs and grammar-sampled queries for differential testing.

Graphs stay small (<= 12 nodes, <= 30 relationships) and draw labels,
types and property values from small pools so generated predicates hit
real data often enough to be interesting. Queries are built as ASTs and
rendered through the canonical printer, which doubles as round-trip
coverage.
"""

from __future__ import annotations

import random
from typing import List, Optional, Tuple

from askgraph.cypher.ast import (
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
    OrderItem,
    Pattern,
    PropertyAccess,
    QueryAst,
    RelPattern,
    ReturnItem,
    Variable,
)
from askgraph.graph import PropertyGraph

LABEL_POOL = ["Person", "Religious", "Place", "Judicial"]
TYPE_POOL = ["ACCUSES", "MEETS", "WRITES", "KNOWS"]
NAME_POOL = ["Ana", "Juan", "Pedro", "Inés", "Bartolomé", "Leonor"]
TOWN_POOL = ["Ávila", "Toro", "Sahagún"]
TEXT_POOL = [
    "He spoke before the tribunal.",
    "A letter was read aloud.",
    "The meeting happened at dusk.",
]


def random_graph(
    rng: random.Random, max_nodes: int = 12, max_rels: int = 30
) -> PropertyGraph:
    graph = PropertyGraph()
    node_count = rng.randint(1, max_nodes)
    node_ids: List[str] = []
    for i in range(node_count):
        if rng.random() < 0.15:
            node_ids.append(
                graph.add_paragraph(
                    rng.choice(TEXT_POOL), {"folio": f"{i}r"}, node_id=f"n{i + 1}"
                )
            )
            continue
        labels = rng.sample(LABEL_POOL, rng.randint(1, 2))
        properties = {}
        if rng.random() < 0.7:
            properties["age"] = rng.randint(1, 4)
        if rng.random() < 0.5:
            properties["town"] = rng.choice(TOWN_POOL)
        if rng.random() < 0.4:
            properties["active"] = rng.random() < 0.5
        name = f"{rng.choice(NAME_POOL)} {i + 1}"
        node_ids.append(graph.add_entity(name, labels, properties, node_id=f"n{i + 1}"))

    rel_count = rng.randint(0, max_rels) if node_count else 0
    for j in range(rel_count):
        source = rng.choice(node_ids)
        target = rng.choice(node_ids)
        properties = {}
        if rng.random() < 0.6:
            properties["weight"] = rng.randint(1, 3)
        graph.add_relationship(
            source,
            target,
            rng.choice(TYPE_POOL),
            category=rng.choice(["talk", "law", ""]),
            sentence=rng.choice(["", "They met in the square."]),
            properties=properties,
            rel_id=f"r{j + 1}",
        )
    return graph.finalize()


# -- query sampling -----------------------------------------------------------

NODE_KEYS = ["age", "town", "active", "name"]
REL_KEYS = ["weight", "type", "category"]


def _literal_for(rng: random.Random, key: str) -> Literal:
    if key == "age":
        return Literal(rng.randint(1, 5))
    if key == "weight":
        return Literal(rng.randint(1, 3))
    if key == "active":
        return Literal(rng.random() < 0.5)
    if key == "town":
        return Literal(rng.choice(TOWN_POOL + ["Nowhere"]))
    if key == "type":
        return Literal(rng.choice(TYPE_POOL))
    if key == "category":
        return Literal(rng.choice(["talk", "law"]))
    return Literal(rng.choice(NAME_POOL + ["Zzqx"]))


def _random_node_pattern(rng: random.Random, variable: Optional[str]) -> NodePattern:
    labels: Tuple[str, ...] = ()
    if rng.random() < 0.4:
        labels = tuple(rng.sample(LABEL_POOL + ["Paragraph"], rng.randint(1, 2)))
    properties: Tuple = ()
    if rng.random() < 0.3:
        key = rng.choice(["age", "town", "name"])
        properties = ((key, _literal_for(rng, key)),)
    return NodePattern(variable=variable, labels=labels, properties=properties)


def _random_rel_pattern(rng: random.Random, variable: Optional[str]) -> RelPattern:
    types: Tuple[str, ...] = ()
    if rng.random() < 0.5:
        types = tuple(rng.sample(TYPE_POOL, rng.randint(1, 2)))
    direction = rng.choice(["undirected", "undirected", "right", "left"])
    return RelPattern(variable=variable, types=types, direction=direction)


def _random_patterns(rng: random.Random) -> Tuple[Pattern, ...]:
    shape = rng.random()
    if shape < 0.2:
        return (Pattern((_random_node_pattern(rng, "a"),)),)
    if shape < 0.55:
        return (
            Pattern(
                (
                    _random_node_pattern(rng, "a"),
                    _random_rel_pattern(rng, "r"),
                    _random_node_pattern(rng, "b"),
                )
            ),
        )
    if shape < 0.75:
        return (
            Pattern(
                (
                    _random_node_pattern(rng, "a"),
                    _random_rel_pattern(rng, "r"),
                    _random_node_pattern(rng, "b"),
                    _random_rel_pattern(rng, "s"),
                    _random_node_pattern(rng, rng.choice(["c", "a"])),
                )
            ),
        )
    if shape < 0.9:
        return (
            Pattern(
                (
                    _random_node_pattern(rng, "a"),
                    _random_rel_pattern(rng, "r"),
                    _random_node_pattern(rng, "b"),
                )
            ),
            Pattern((_random_node_pattern(rng, "c"),)),
        )
    # join through a shared node variable
    return (
        Pattern(
            (
                _random_node_pattern(rng, "a"),
                _random_rel_pattern(rng, "r"),
                _random_node_pattern(rng, "b"),
            )
        ),
        Pattern(
            (
                _random_node_pattern(rng, "a"),
                _random_rel_pattern(rng, "s"),
                _random_node_pattern(rng, "c"),
            )
        ),
    )


def _node_vars(patterns: Tuple[Pattern, ...]) -> List[str]:
    out = []
    for pattern in patterns:
        for element in pattern.node_patterns():
            if element.variable and element.variable not in out:
                out.append(element.variable)
    return out


def _rel_vars(patterns: Tuple[Pattern, ...]) -> List[str]:
    out = []
    for pattern in patterns:
        for element in pattern.rel_patterns():
            if element.variable and element.variable not in out:
                out.append(element.variable)
    return out


def _random_comparison(rng: random.Random, node_vars, rel_vars) -> Comparison:
    roll = rng.random()
    if roll < 0.45 and node_vars:
        var = rng.choice(node_vars)
        key = rng.choice(NODE_KEYS)
        lhs = PropertyAccess(var, key)
        op = rng.choice(["=", "<>", "<", "<=", ">", ">="])
        return Comparison(op, lhs, _literal_for(rng, key))
    if roll < 0.6 and rel_vars:
        var = rng.choice(rel_vars)
        key = rng.choice(REL_KEYS)
        op = rng.choice(["=", "<>", ">="])
        return Comparison(op, PropertyAccess(var, key), _literal_for(rng, key))
    if roll < 0.75 and node_vars:
        var = rng.choice(node_vars)
        op = rng.choice(["CONTAINS", "STARTS WITH", "ENDS WITH"])
        fragment = rng.choice(["An", "dro", "és", "Juan", "q"])
        return Comparison(op, PropertyAccess(var, "name"), Literal(fragment))
    if roll < 0.9 and node_vars:
        var = rng.choice(node_vars)
        values = tuple(
            Literal(v) for v in rng.sample(TOWN_POOL + ["Nowhere", "Elsewhere"], rng.randint(1, 3))
        )
        return Comparison("IN", PropertyAccess(var, "town"), ListLiteral(values))
    if len(node_vars) >= 2:
        left, right = rng.sample(node_vars, 2)
        return Comparison("=", PropertyAccess(left, "age"), PropertyAccess(right, "age"))
    var = node_vars[0] if node_vars else rel_vars[0]
    return Comparison("<>", PropertyAccess(var, "age"), Literal(rng.randint(1, 4)))


def _random_predicate(rng: random.Random, node_vars, rel_vars, depth: int = 0):
    roll = rng.random()
    if depth < 2 and roll < 0.25:
        return And(
            _random_predicate(rng, node_vars, rel_vars, depth + 1),
            _random_predicate(rng, node_vars, rel_vars, depth + 1),
        )
    if depth < 2 and roll < 0.4:
        return Or(
            _random_predicate(rng, node_vars, rel_vars, depth + 1),
            _random_predicate(rng, node_vars, rel_vars, depth + 1),
        )
    if depth < 2 and roll < 0.5:
        return Not(_random_predicate(rng, node_vars, rel_vars, depth + 1))
    if roll < 0.62 and node_vars:
        return LabelPredicate(rng.choice(node_vars), rng.choice(LABEL_POOL + ["Paragraph"]))
    return _random_comparison(rng, node_vars, rel_vars)


def random_query(rng: random.Random) -> QueryAst:
    patterns = _random_patterns(rng)
    node_vars = _node_vars(patterns)
    rel_vars = _rel_vars(patterns)
    all_vars = node_vars + rel_vars

    where = None
    if rng.random() < 0.6:
        where = _random_predicate(rng, node_vars, rel_vars)

    items: List[ReturnItem] = []
    used_aliases: List[str] = []
    item_count = rng.randint(1, 3)
    aggregate_mode = rng.random() < 0.3
    for n in range(item_count):
        if aggregate_mode and n == item_count - 1:
            pick = rng.random()
            if pick < 0.4:
                expr = CountAll()
            elif pick < 0.7:
                expr = CountExpr(Variable(rng.choice(all_vars)))
            else:
                var = rng.choice(node_vars) if node_vars else rng.choice(all_vars)
                expr = CountExpr(PropertyAccess(var, rng.choice(NODE_KEYS)), distinct=True)
        else:
            var = rng.choice(all_vars)
            if rng.random() < 0.5:
                expr = Variable(var)
            else:
                keys = NODE_KEYS if var in node_vars else REL_KEYS
                expr = PropertyAccess(var, rng.choice(keys))
        alias = None
        if rng.random() < 0.4:
            alias = f"col{n}"
            used_aliases.append(alias)
        items.append(ReturnItem(expression=expr, alias=alias))

    distinct = not aggregate_mode and rng.random() < 0.25

    order_by: List[OrderItem] = []
    if rng.random() < 0.4:
        for item in rng.sample(items, rng.randint(1, len(items))):
            expr = Variable(item.alias) if item.alias else item.expression
            order_by.append(OrderItem(expression=expr, ascending=rng.random() < 0.6))

    skip = rng.randint(0, 3) if rng.random() < 0.2 else None
    limit = rng.randint(0, 5) if rng.random() < 0.3 else None

    return QueryAst(
        patterns=patterns,
        return_items=tuple(items),
        where=where,
        distinct=distinct,
        order_by=tuple(order_by),
        skip=skip,
        limit=limit,
    )
