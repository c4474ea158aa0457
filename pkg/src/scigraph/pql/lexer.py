from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from ..errors import ScigraphError

KEYWORDS = frozenset({"MATCH", "WHERE", "RETURN", "AND", "OR", "NOT", "IN", "TRUE", "FALSE"})


class QuerySyntaxError(ScigraphError):
    """Malformed query text; carries the 1-based position and offending token."""

    def __init__(self, message: str, line: int, column: int, token: str):
        super().__init__(f"line {line}, column {column}: {message} (at {token!r})")
        self.line = line
        self.column = column
        self.token = token


class UndeclaredVariable(QuerySyntaxError):
    pass


@dataclass(frozen=True)
class Token:
    kind: str  # KEYWORD, IDENT, STRING, INT, FLOAT, SYMBOL, EOF
    text: str
    value: Union[str, int, float, None]
    line: int
    column: int

    def describe(self) -> str:
        return "end of input" if self.kind == "EOF" else self.text


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<float>-?(?:\d+\.\d+(?:[eE][+-]?\d+)?|\d+[eE][+-]?\d+))
  | (?P<int>-?\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<symbol><>|<=|>=|[()\[\]:,.=<>-])
  | (?P<quote>')
    """,
    re.VERBOSE,
)


def _read_string(text: str, start: int, line: int, col: int) -> tuple[str, int]:
    chars = []
    i = start + 1
    while i < len(text):
        ch = text[i]
        if ch == "\\" and i + 1 < len(text):
            chars.append(text[i + 1])
            i += 2
            continue
        if ch == "'":
            return "".join(chars), i + 1
        if ch == "\n":
            break
        chars.append(ch)
        i += 1
    raise QuerySyntaxError("unterminated string literal", line, col, text[start:i])


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        col = pos - line_start + 1
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise QuerySyntaxError("unexpected character", line, col, text[pos])
        kind = m.lastgroup
        if kind == "ws":
            chunk = m.group()
            if "\n" in chunk:
                line += chunk.count("\n")
                line_start = pos + chunk.rfind("\n") + 1
            pos = m.end()
            continue
        if kind == "quote":
            value, end = _read_string(text, pos, line, col)
            tokens.append(Token("STRING", text[pos:end], value, line, col))
            pos = end
            continue
        word = m.group()
        if kind == "float":
            tokens.append(Token("FLOAT", word, float(word), line, col))
        elif kind == "int":
            tokens.append(Token("INT", word, int(word), line, col))
        elif kind == "ident":
            if word.upper() in KEYWORDS:
                tokens.append(Token("KEYWORD", word, word.upper(), line, col))
            else:
                tokens.append(Token("IDENT", word, word, line, col))
        else:
            tokens.append(Token("SYMBOL", word, word, line, col))
        pos = m.end()
    tokens.append(Token("EOF", "", None, line, pos - line_start + 1))
    return tokens
