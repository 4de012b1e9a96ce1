"""Query language: AST, parser and serializer."""

from .ast import *  # noqa: F401,F403
from .ast import __all__ as _ast_all
from .parser import engine_prefixes, iter_view_defs, parse_query, parse_view_def
from .serializer import serialize_expr, serialize_query

__all__ = list(_ast_all) + [
    "engine_prefixes",
    "parse_query",
    "parse_view_def",
    "iter_view_defs",
    "serialize_expr",
    "serialize_query",
]
