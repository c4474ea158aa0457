"""Recursive-descent parser for MATCH ... [WHERE ...] RETURN ... queries.

Grammar::

    query    := "MATCH" pattern ["WHERE" expr] "RETURN" proj {"," proj}
    pattern  := nodepat { relpat nodepat }
    nodepat  := "(" IDENT [":" IDENT] ")"
    relpat   := "-" "[" [IDENT] [":" IDENT] "]" "-" [">"]
              | "<" "-" "[" [IDENT] [":" IDENT] "]" "-"
    expr     := term {"OR" term}
    term     := factor {"AND" factor}
    factor   := ["NOT"] ( "(" expr ")" | cmp )
    cmp      := operand (CMPOP operand | "IN" "[" literal {"," literal} "]")
    operand  := IDENT "." IDENT | literal
    proj     := IDENT "." IDENT
    literal  := STRING | INT | FLOAT | "true" | "false"

A bare node variable spelled like a node label, e.g. ``(Journal)``, is
both the variable and its label constraint.
"""

from __future__ import annotations

from typing import Optional

from ..graph import LABELS
from .ast import And, Comparison, Expr, InList, Literal, NodePattern, Not, Operand, Or, PropertyRef, Query, RelPattern
from .lexer import QuerySyntaxError, Token, UndeclaredVariable, tokenize

CMP_OPS = ("=", "<>", "<", "<=", ">", ">=")


class Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0
        self.refs: list[Token] = []
        self.rel_decls: list[Token] = []

    # token helpers

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, offset: int = 1) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def error(self, message: str, tok: Optional[Token] = None) -> QuerySyntaxError:
        tok = tok or self.tok
        return QuerySyntaxError(message, tok.line, tok.column, tok.describe())

    def advance(self) -> Token:
        tok = self.tok
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def is_symbol(self, text: str, tok: Optional[Token] = None) -> bool:
        tok = tok or self.tok
        return tok.kind == "SYMBOL" and tok.text == text

    def is_keyword(self, word: str) -> bool:
        return self.tok.kind == "KEYWORD" and self.tok.value == word

    def expect_symbol(self, text: str) -> Token:
        if not self.is_symbol(text):
            raise self.error(f"expected {text!r}")
        return self.advance()

    def expect_keyword(self, word: str) -> Token:
        if not self.is_keyword(word):
            raise self.error(f"expected {word}")
        return self.advance()

    def expect_ident(self, what: str) -> Token:
        if self.tok.kind != "IDENT":
            raise self.error(f"expected {what}")
        return self.advance()

    # grammar

    def parse_query(self) -> Query:
        self.expect_keyword("MATCH")
        nodes, rels = self.parse_pattern()
        where = None
        if self.is_keyword("WHERE"):
            self.advance()
            where = self.parse_expr()
        self.expect_keyword("RETURN")
        returns = [self.parse_property("projection")]
        while self.is_symbol(","):
            self.advance()
            returns.append(self.parse_property("projection"))
        if self.tok.kind != "EOF":
            raise self.error("unexpected token after RETURN list")
        return Query(tuple(nodes), tuple(rels), where, tuple(returns))

    def parse_pattern(self) -> tuple[list[NodePattern], list[RelPattern]]:
        nodes = [self.parse_node()]
        rels = []
        while self.is_symbol("-") or self.is_symbol("<"):
            rels.append(self.parse_rel())
            nodes.append(self.parse_node())
        return nodes, rels

    def parse_node(self) -> NodePattern:
        self.expect_symbol("(")
        var = self.expect_ident("node variable").text
        label = None
        if self.is_symbol(":"):
            self.advance()
            label = self.expect_ident("node label").text
        elif var in LABELS:
            label = var
        self.expect_symbol(")")
        return NodePattern(var, label)

    def parse_rel(self) -> RelPattern:
        left = False
        if self.is_symbol("<"):
            self.advance()
            left = True
        self.expect_symbol("-")
        self.expect_symbol("[")
        var = rel_type = None
        if self.tok.kind == "IDENT":
            self.rel_decls.append(self.tok)
            var = self.advance().text
        if self.is_symbol(":"):
            self.advance()
            rel_type = self.expect_ident("relationship type").text
        self.expect_symbol("]")
        self.expect_symbol("-")
        right = False
        if self.is_symbol(">"):
            if left:
                raise self.error("relationship cannot point both ways")
            self.advance()
            right = True
        direction = "left" if left else "right" if right else "undirected"
        return RelPattern(var, rel_type, direction)

    def parse_expr(self) -> Expr:
        terms = [self.parse_term()]
        while self.is_keyword("OR"):
            self.advance()
            terms.append(self.parse_term())
        return terms[0] if len(terms) == 1 else Or(tuple(terms))

    def parse_term(self) -> Expr:
        factors = [self.parse_factor()]
        while self.is_keyword("AND"):
            self.advance()
            factors.append(self.parse_factor())
        return factors[0] if len(factors) == 1 else And(tuple(factors))

    def parse_factor(self) -> Expr:
        negate = False
        if self.is_keyword("NOT"):
            self.advance()
            negate = True
        if self.is_symbol("("):
            self.advance()
            inner = self.parse_expr()
            self.expect_symbol(")")
        else:
            inner = self.parse_comparison()
        return Not(inner) if negate else inner

    def parse_comparison(self) -> Expr:
        left = self.parse_operand()
        if self.is_keyword("IN"):
            self.advance()
            self.expect_symbol("[")
            values = [self.parse_literal()]
            while self.is_symbol(","):
                self.advance()
                values.append(self.parse_literal())
            self.expect_symbol("]")
            return InList(left, tuple(values))
        if self.tok.kind == "SYMBOL" and self.tok.text in CMP_OPS:
            op = self.advance().text
            return Comparison(left, op, self.parse_operand())
        raise self.error("expected comparison operator or IN")

    def parse_operand(self) -> Operand:
        if self.tok.kind == "IDENT":
            return self.parse_property("property reference")
        return self.parse_literal()

    def parse_property(self, what: str) -> PropertyRef:
        var = self.expect_ident(what)
        self.refs.append(var)
        self.expect_symbol(".")
        key = self.expect_ident("property name")
        return PropertyRef(var.text, key.text)

    def parse_literal(self) -> Literal:
        tok = self.tok
        if tok.kind in ("STRING", "INT", "FLOAT"):
            self.advance()
            return Literal(tok.value)  # type: ignore[arg-type]
        if tok.kind == "KEYWORD" and tok.value in ("TRUE", "FALSE"):
            self.advance()
            return Literal(tok.value == "TRUE")
        raise self.error("expected literal")


def _check_variables(parser: Parser, query: Query) -> None:
    node_vars = {n.var for n in query.nodes}
    seen: set[str] = set()
    for tok in parser.rel_decls:
        if tok.text in seen or tok.text in node_vars:
            raise QuerySyntaxError("variable declared twice", tok.line, tok.column, tok.text)
        seen.add(tok.text)
    declared = node_vars | seen
    for tok in parser.refs:
        if tok.text not in declared:
            raise UndeclaredVariable(
                f"variable {tok.text!r} is not declared in the pattern", tok.line, tok.column, tok.text
            )


def parse(text: str) -> Query:
    parser = Parser(text)
    query = parser.parse_query()
    _check_variables(parser, query)
    return query
