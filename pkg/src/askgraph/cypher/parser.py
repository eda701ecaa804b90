"""Recursive-descent parser for the Cypher subset.

Anything outside the subset that we can name is rejected with
UnsupportedFeature (a ParseError subclass), so callers can distinguish
"not Cypher" from "Cypher we deliberately do not do". Variable-length
relationship patterns are rejected here, at parse time, never later.
"""

from __future__ import annotations

from typing import List, Optional, Tuple, Union

from ..errors import ParseError, UnsupportedFeature
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
    OrderItem,
    Pattern,
    PropertyAccess,
    QueryAst,
    RelPattern,
    ReturnItem,
    Variable,
)
from .lexer import Token, tokenize

UNSUPPORTED_CLAUSES = {
    "OPTIONAL": "OPTIONAL MATCH",
    "CREATE": "CREATE",
    "MERGE": "MERGE",
    "DELETE": "DELETE",
    "DETACH": "DETACH DELETE",
    "SET": "SET",
    "REMOVE": "REMOVE",
    "UNION": "UNION",
    "UNWIND": "UNWIND",
    "CALL": "CALL",
    "FOREACH": "FOREACH",
    "WITH": "WITH",
}

UNSUPPORTED_FUNCTIONS = {"shortestpath", "allshortestpaths"}


class _Parser:
    def __init__(self, tokens: List[Token]):
        self.tokens = tokens
        self.pos = 0

    # -- token plumbing ------------------------------------------------------

    def peek(self, offset: int = 0) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def at(self, *kinds: str) -> bool:
        return self.peek().kind in kinds

    def take(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def expect(self, kind: str, what: Optional[str] = None) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            raise self.error(f"expected {what or kind}, found {tok.text or 'end of input'!r}",
                             expected=(kind,))
        return self.take()

    def error(self, message: str, expected: Tuple[str, ...] = ()) -> ParseError:
        tok = self.peek()
        return ParseError(message, tok.line, tok.column, expected)

    def unsupported(self, message: str) -> UnsupportedFeature:
        tok = self.peek()
        return UnsupportedFeature(message, tok.line, tok.column)

    # -- entry ----------------------------------------------------------------

    def parse_query(self) -> QueryAst:
        self.reject_unsupported_clause()
        self.expect("MATCH", "MATCH")
        patterns = [self.parse_pattern()]
        while self.at("COMMA"):
            self.take()
            patterns.append(self.parse_pattern())

        where = None
        self.reject_unsupported_clause()
        if self.at("WHERE"):
            self.take()
            where = self.parse_or_expr()

        self.reject_unsupported_clause()
        self.expect("RETURN", "RETURN")
        distinct = False
        if self.at("DISTINCT"):
            self.take()
            distinct = True
        return_items = [self.parse_return_item()]
        while self.at("COMMA"):
            self.take()
            return_items.append(self.parse_return_item())

        order_by: List[OrderItem] = []
        if self.at("ORDER"):
            self.take()
            self.expect("BY", "BY after ORDER")
            order_by.append(self.parse_order_item())
            while self.at("COMMA"):
                self.take()
                order_by.append(self.parse_order_item())

        skip = None
        if self.at("SKIP"):
            self.take()
            skip = self.expect("INTEGER", "a non-negative integer after SKIP").value
        limit = None
        if self.at("LIMIT"):
            self.take()
            limit = self.expect("INTEGER", "a non-negative integer after LIMIT").value

        self.reject_unsupported_clause()
        if not self.at("EOF"):
            raise self.error(f"unexpected {self.peek().text!r} after end of query")

        ast = QueryAst(
            patterns=tuple(patterns),
            return_items=tuple(return_items),
            where=where,
            distinct=distinct,
            order_by=tuple(order_by),
            skip=skip,
            limit=limit,
        )
        self.check_bound_variables(ast)
        return ast

    def reject_unsupported_clause(self) -> None:
        kind = self.peek().kind
        if kind in UNSUPPORTED_CLAUSES:
            raise self.unsupported(
                f"{UNSUPPORTED_CLAUSES[kind]} is outside the supported subset"
            )
        if kind == "DOLLAR":
            raise self.unsupported("query parameters are outside the supported subset")

    def check_bound_variables(self, ast: QueryAst) -> None:
        # Unbound variables are a validation finding, not a parse failure;
        # parse only guarantees structural invariants (see validator).
        return

    # -- patterns ---------------------------------------------------------------

    def parse_pattern(self) -> Pattern:
        if self.at("IDENT") and self.peek().text.lower() in UNSUPPORTED_FUNCTIONS:
            raise self.unsupported(
                f"{self.peek().text} (path functions are outside the supported subset)"
            )
        elements: List[Union[NodePattern, RelPattern]] = [self.parse_node_pattern()]
        while self.at("DASH", "LT"):
            elements.append(self.parse_rel_pattern())
            elements.append(self.parse_node_pattern())
        return Pattern(elements=tuple(elements))

    def parse_node_pattern(self) -> NodePattern:
        self.expect("LPAREN", "'(' to start a node pattern")
        variable = None
        if self.at("IDENT"):
            variable = self.take().value
        labels: List[str] = []
        while self.at("COLON"):
            self.take()
            labels.append(self.parse_name("label"))
        properties: Tuple[Tuple[str, Literal], ...] = ()
        if self.at("LBRACE"):
            properties = self.parse_property_map()
        self.expect("RPAREN", "')' to close the node pattern")
        return NodePattern(variable=variable, labels=tuple(labels), properties=properties)

    def parse_rel_pattern(self) -> RelPattern:
        left_arrow = False
        if self.at("LT"):
            self.take()
            left_arrow = True
        self.expect("DASH", "'-' in a relationship pattern")
        variable = None
        types: List[str] = []
        if self.at("LBRACKET"):
            self.take()
            if self.at("IDENT"):
                variable = self.take().value
            if self.at("COLON"):
                self.take()
                types.append(self.parse_name("relationship type"))
                while self.at("PIPE"):
                    self.take()
                    if self.at("COLON"):  # tolerate r:A|:B alternation spelling
                        self.take()
                    types.append(self.parse_name("relationship type"))
            if self.at("STAR"):
                raise self.unsupported(
                    "variable-length relationship patterns are outside the supported subset"
                )
            if self.at("LBRACE"):
                raise self.unsupported(
                    "relationship property maps are outside the supported subset"
                )
            self.expect("RBRACKET", "']' to close the relationship pattern")
        if self.at("ARROW_RIGHT"):
            self.take()
            right_arrow = True
        else:
            self.expect("DASH", "'-' or '->' to finish the relationship pattern")
            right_arrow = False
        if left_arrow and right_arrow:
            raise self.error("a relationship cannot point both ways")
        direction = "left" if left_arrow else ("right" if right_arrow else "undirected")
        return RelPattern(variable=variable, types=tuple(types), direction=direction)

    def parse_name(self, what: str) -> str:
        tok = self.peek()
        if tok.kind == "IDENT":
            return self.take().value
        raise self.error(f"expected a {what} name, found {tok.text or 'end of input'!r}")

    def parse_property_map(self) -> Tuple[Tuple[str, Literal], ...]:
        self.expect("LBRACE")
        pairs: List[Tuple[str, Literal]] = []
        if not self.at("RBRACE"):
            while True:
                key = self.parse_name("property key")
                self.expect("COLON", "':' after property key")
                pairs.append((key, self.parse_literal()))
                if self.at("COMMA"):
                    self.take()
                    continue
                break
        self.expect("RBRACE", "'}' to close the property map")
        return tuple(pairs)

    # -- expressions --------------------------------------------------------------

    def parse_literal(self) -> Literal:
        tok = self.peek()
        if tok.kind == "STRING":
            return Literal(self.take().value)
        if tok.kind == "INTEGER" or tok.kind == "FLOAT":
            return Literal(self.take().value)
        if tok.kind == "DASH":
            self.take()
            num = self.peek()
            if num.kind not in ("INTEGER", "FLOAT"):
                raise self.error("expected a number after '-'")
            return Literal(-self.take().value)
        if tok.kind == "TRUE":
            self.take()
            return Literal(True)
        if tok.kind == "FALSE":
            self.take()
            return Literal(False)
        if tok.kind == "NULL":
            self.take()
            return Literal(None)
        if tok.kind == "DOLLAR":
            raise self.unsupported("query parameters are outside the supported subset")
        raise self.error(f"expected a literal value, found {tok.text or 'end of input'!r}")

    def parse_or_expr(self):
        left = self.parse_and_expr()
        while self.at("OR"):
            self.take()
            left = Or(left, self.parse_and_expr())
        return left

    def parse_and_expr(self):
        left = self.parse_not_expr()
        while self.at("AND"):
            self.take()
            left = And(left, self.parse_not_expr())
        return left

    def parse_not_expr(self):
        if self.at("NOT"):
            self.take()
            return Not(self.parse_not_expr())
        return self.parse_predicate()

    def parse_predicate(self):
        if self.at("LPAREN"):
            self.take()
            inner = self.parse_or_expr()
            self.expect("RPAREN", "')'")
            return inner

        lhs = self.parse_value_expr()

        # label predicate: x:Label
        if self.at("COLON"):
            if not isinstance(lhs, Variable):
                raise self.error("a label predicate needs a plain variable on its left")
            self.take()
            label = self.parse_name("label")
            return LabelPredicate(variable=lhs.name, label=label)

        tok = self.peek()
        simple_ops = {"EQ": "=", "NEQ": "<>", "LT": "<", "LE": "<=", "GT": ">", "GE": ">="}
        if tok.kind in simple_ops:
            self.take()
            return Comparison(simple_ops[tok.kind], lhs, self.parse_value_expr())
        if tok.kind == "CONTAINS":
            self.take()
            return Comparison("CONTAINS", lhs, self.parse_value_expr())
        if tok.kind == "STARTS":
            self.take()
            self.expect("WITH", "WITH after STARTS")
            return Comparison("STARTS WITH", lhs, self.parse_value_expr())
        if tok.kind == "ENDS":
            self.take()
            self.expect("WITH", "WITH after ENDS")
            return Comparison("ENDS WITH", lhs, self.parse_value_expr())
        if tok.kind == "IN":
            self.take()
            return Comparison("IN", lhs, self.parse_list_literal())
        raise self.error(
            f"expected a comparison operator, found {tok.text or 'end of input'!r}"
        )

    def parse_list_literal(self) -> ListLiteral:
        self.expect("LBRACKET", "'[' to start a list literal")
        items: List[Literal] = []
        if not self.at("RBRACKET"):
            while True:
                items.append(self.parse_literal())
                if self.at("COMMA"):
                    self.take()
                    continue
                break
        self.expect("RBRACKET", "']' to close the list literal")
        return ListLiteral(items=tuple(items))

    def parse_value_expr(self):
        tok = self.peek()
        if tok.kind == "IDENT":
            name = self.take().value
            if self.at("DOT"):
                self.take()
                key = self.parse_name("property")
                return PropertyAccess(variable=name, key=key)
            return Variable(name=name)
        return self.parse_literal()

    # -- return / order -----------------------------------------------------------

    def parse_return_expr(self):
        if self.at("COUNT"):
            self.take()
            self.expect("LPAREN", "'(' after count")
            if self.at("STAR"):
                self.take()
                self.expect("RPAREN", "')'")
                return CountAll()
            distinct = False
            if self.at("DISTINCT"):
                self.take()
                distinct = True
            operand = self.parse_value_expr()
            if not isinstance(operand, (Variable, PropertyAccess)):
                raise self.error("count() takes a variable or a property access")
            self.expect("RPAREN", "')'")
            return CountExpr(operand=operand, distinct=distinct)
        if self.at("IDENT"):
            expr = self.parse_value_expr()
            return expr
        if self.at("DOLLAR"):
            raise self.unsupported("query parameters are outside the supported subset")
        raise self.error(
            f"expected a variable, property access or count(), found "
            f"{self.peek().text or 'end of input'!r}"
        )

    def parse_return_item(self) -> ReturnItem:
        expr = self.parse_return_expr()
        alias = None
        if self.at("AS"):
            self.take()
            alias = self.parse_name("alias")
        return ReturnItem(expression=expr, alias=alias)

    def parse_order_item(self) -> OrderItem:
        expr = self.parse_return_expr()
        ascending = True
        if self.at("ASC"):
            self.take()
        elif self.at("DESC"):
            self.take()
            ascending = False
        return OrderItem(expression=expr, ascending=ascending)


def parse(text: str) -> QueryAst:
    """Parse query text into a QueryAst; raises LexError/ParseError/UnsupportedFeature."""
    return _Parser(tokenize(text)).parse_query()
