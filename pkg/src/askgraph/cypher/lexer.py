"""Hand-written lexer for the Cypher subset.

Keywords are case-insensitive and reserved; identifiers that collide with
a keyword must be backquoted. Backquoted identifiers preserve internal
spaces and diacritics; a doubled backquote escapes a literal one. Every
token records its 1-based line/column for error messages.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Union

from ..errors import LexError

KEYWORDS = {
    "MATCH", "WHERE", "RETURN", "DISTINCT", "ORDER", "BY", "SKIP", "LIMIT",
    "AND", "OR", "NOT", "AS", "IN", "CONTAINS", "STARTS", "ENDS", "WITH",
    "ASC", "DESC", "TRUE", "FALSE", "NULL", "COUNT",
    # recognized only to be rejected as unsupported clauses
    "OPTIONAL", "CREATE", "MERGE", "DELETE", "DETACH", "SET", "REMOVE",
    "UNION", "UNWIND", "CALL", "FOREACH",
}

PUNCT = {
    "(": "LPAREN", ")": "RPAREN", "[": "LBRACKET", "]": "RBRACKET",
    "{": "LBRACE", "}": "RBRACE", ":": "COLON", ",": "COMMA", ".": "DOT",
    "|": "PIPE", "=": "EQ", "-": "DASH", "*": "STAR", "$": "DOLLAR",
}


@dataclass(frozen=True)
class Token:
    kind: str  # keyword name, punct name, IDENT, STRING, INTEGER, FLOAT, EOF
    text: str
    value: Union[str, int, float, None]
    line: int
    column: int


def tokenize(text: str) -> List[Token]:
    tokens: List[Token] = []
    pos = 0
    line = 1
    col = 1
    n = len(text)

    def advance(count: int) -> None:
        nonlocal pos, line, col
        for _ in range(count):
            if pos < n and text[pos] == "\n":
                line += 1
                col = 1
            else:
                col += 1
            pos += 1

    while pos < n:
        ch = text[pos]
        if ch in " \t\r\n":
            advance(1)
            continue
        if text.startswith("//", pos):
            while pos < n and text[pos] != "\n":
                advance(1)
            continue
        start_line, start_col = line, col

        # multi-char operators first
        for op, kind in (("<>", "NEQ"), ("<=", "LE"), (">=", "GE"), ("->", "ARROW_RIGHT")):
            if text.startswith(op, pos):
                tokens.append(Token(kind, op, None, start_line, start_col))
                advance(2)
                break
        else:
            if ch == "<":
                tokens.append(Token("LT", "<", None, start_line, start_col))
                advance(1)
            elif ch == ">":
                tokens.append(Token("GT", ">", None, start_line, start_col))
                advance(1)
            elif ch in PUNCT:
                tokens.append(Token(PUNCT[ch], ch, None, start_line, start_col))
                advance(1)
            elif ch in "'\"":
                quote = ch
                advance(1)
                out = []
                while True:
                    if pos >= n:
                        raise LexError("unterminated string literal", start_line, start_col)
                    c = text[pos]
                    if c == "\\":
                        if pos + 1 >= n:
                            raise LexError("unterminated string escape", line, col)
                        esc = text[pos + 1]
                        mapped = {"n": "\n", "t": "\t", "r": "\r", "\\": "\\", "'": "'", '"': '"', "`": "`"}.get(esc)
                        if mapped is None:
                            raise LexError(f"unknown string escape \\{esc}", line, col)
                        out.append(mapped)
                        advance(2)
                    elif c == quote:
                        advance(1)
                        break
                    else:
                        out.append(c)
                        advance(1)
                value = "".join(out)
                tokens.append(Token("STRING", value, value, start_line, start_col))
            elif ch == "`":
                advance(1)
                out = []
                while True:
                    if pos >= n:
                        raise LexError("unterminated backquoted identifier", start_line, start_col)
                    c = text[pos]
                    if c == "`":
                        if pos + 1 < n and text[pos + 1] == "`":
                            out.append("`")
                            advance(2)
                        else:
                            advance(1)
                            break
                    else:
                        out.append(c)
                        advance(1)
                name = "".join(out)
                if not name:
                    raise LexError("empty backquoted identifier", start_line, start_col)
                tokens.append(Token("IDENT", name, name, start_line, start_col))
            elif ch.isdigit():
                j = pos
                while j < n and text[j].isdigit():
                    j += 1
                is_float = False
                if j < n and text[j] == "." and j + 1 < n and text[j + 1].isdigit():
                    is_float = True
                    j += 1
                    while j < n and text[j].isdigit():
                        j += 1
                if j < n and text[j] in "eE":
                    k = j + 1
                    if k < n and text[k] in "+-":
                        k += 1
                    if k < n and text[k].isdigit():
                        is_float = True
                        j = k
                        while j < n and text[j].isdigit():
                            j += 1
                raw = text[pos:j]
                advance(j - pos)
                if is_float:
                    tokens.append(Token("FLOAT", raw, float(raw), start_line, start_col))
                else:
                    tokens.append(Token("INTEGER", raw, int(raw), start_line, start_col))
            elif ch.isalpha() or ch == "_":
                j = pos
                while j < n and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                raw = text[pos:j]
                advance(j - pos)
                upper = raw.upper()
                if upper in KEYWORDS:
                    tokens.append(Token(upper, raw, None, start_line, start_col))
                else:
                    tokens.append(Token("IDENT", raw, raw, start_line, start_col))
            else:
                raise LexError(f"illegal character {ch!r}", start_line, start_col)

    tokens.append(Token("EOF", "", None, line, col))
    return tokens
