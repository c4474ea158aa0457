"""Pattern query language: ``MATCH (a:Label)-[:TYPE]->(b) WHERE ... RETURN a.key``."""

from .ast import Query, format_query
from .engine import ResultTable, evaluate, match, run
from .lexer import QuerySyntaxError, UndeclaredVariable
from .parser import parse

__all__ = [
    "Query",
    "QuerySyntaxError",
    "ResultTable",
    "UndeclaredVariable",
    "evaluate",
    "format_query",
    "match",
    "parse",
    "run",
]
