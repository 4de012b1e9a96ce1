"""Canonical query text.

Output re-parses to a structurally equal AST: IRIs are written in full,
expressions are fully parenthesized, and every group member that could merge
with a neighbour on re-parse is wrapped in its own braces.
"""

from __future__ import annotations

from ..terms import BNode, Literal, IRI
from .ast import (
    And,
    Ask,
    Bgp,
    Bound,
    Compare,
    Const,
    Construct,
    Filtered,
    From,
    FromInline,
    FromNamed,
    FromNamedInline,
    GraphAt,
    Group,
    IsIri,
    Not,
    Optional_,
    Or,
    Query,
    Regex,
    Select,
    Str,
    Union_,
    Var,
)


def _term(t) -> str:
    if isinstance(t, Var):
        return "?" + t.name
    if isinstance(t, (IRI, BNode, Literal)):
        return t.n3()
    raise TypeError(f"not a pattern term: {t!r}")


def _string(s: str) -> str:
    return Literal(s).n3()


def serialize_expr(e) -> str:
    if isinstance(e, Var):
        return "?" + e.name
    if isinstance(e, Const):
        return e.term.n3()
    if isinstance(e, Compare):
        return f"({serialize_expr(e.left)} {e.op} {serialize_expr(e.right)})"
    if isinstance(e, And):
        return f"({serialize_expr(e.left)} && {serialize_expr(e.right)})"
    if isinstance(e, Or):
        return f"({serialize_expr(e.left)} || {serialize_expr(e.right)})"
    if isinstance(e, Not):
        return f"(!{serialize_expr(e.arg)})"
    if isinstance(e, Bound):
        return f"BOUND(?{e.var.name})"
    if isinstance(e, IsIri):
        return f"isIRI({serialize_expr(e.arg)})"
    if isinstance(e, Str):
        return f"STR({serialize_expr(e.arg)})"
    if isinstance(e, Regex):
        flags = f", {_string(e.flags)}" if e.flags else ""
        return f"REGEX({serialize_expr(e.arg)}, {_string(e.pattern)}{flags})"
    raise TypeError(f"not an expression: {e!r}")


def _triples(patterns) -> str:
    return " . ".join(f"{_term(a)} {_term(b)} {_term(c)}" for a, b, c in patterns)


def _body(p) -> str:
    """Text that, wrapped in braces, re-parses to ``p``."""
    if isinstance(p, Bgp):
        return _triples(p.triples)
    if isinstance(p, Group):
        return " ".join(_member(m) for m in p.members)
    if isinstance(p, Filtered):
        inner = p.pattern
        head = f"{{ {_body(inner)} }}" if isinstance(inner, Filtered) else _body(inner)
        return f"{head} FILTER ({serialize_expr(p.expr)})".strip()
    if isinstance(p, Union_):
        return f"{{ {_body(p.left)} }} UNION {{ {_body(p.right)} }}"
    if isinstance(p, GraphAt):
        return f"GRAPH {_term(p.name)} {{ {_body(p.pattern)} }}"
    if isinstance(p, Optional_):
        return f"OPTIONAL {{ {_body(p.pattern)} }}"
    raise TypeError(f"not a graph pattern: {p!r}")


def _member(m) -> str:
    if isinstance(m, (Optional_, GraphAt, Union_)):
        return _body(m)
    return f"{{ {_body(m)} }}"


def serialize_query(q: Query, with_prologue: bool = True) -> str:
    parts = []
    if with_prologue:
        if q.prologue.base is not None:
            parts.append(f"BASE <{q.prologue.base}>")
        for name, ns in q.prologue.prefixes:
            parts.append(f"PREFIX {name}: <{ns}>")
    form = q.form
    if isinstance(form, Select):
        head = "SELECT DISTINCT" if form.distinct else "SELECT"
        cols = "*" if form.variables is None else " ".join("?" + v.name for v in form.variables)
        parts.append(f"{head} {cols}")
    elif isinstance(form, Construct):
        parts.append(f"CONSTRUCT {{ {_triples(form.template)} }}")
    elif isinstance(form, Ask):
        parts.append("ASK")
    for clause in q.dataset:
        if isinstance(clause, From):
            parts.append(f"FROM {clause.iri.n3()}")
        elif isinstance(clause, FromNamed):
            parts.append(f"FROM NAMED {clause.iri.n3()}")
        elif isinstance(clause, FromInline):
            parts.append(f"FROM ( {serialize_query(clause.query, False)} )")
        elif isinstance(clause, FromNamedInline):
            parts.append(f"FROM NAMED {clause.iri.n3()} [ {serialize_query(clause.query, False)} ]")
    parts.append(f"WHERE {{ {_body(q.pattern)} }}")
    if q.order_by:
        conds = " ".join(
            f"{'DESC' if c.descending else 'ASC'}({serialize_expr(c.expr)})" for c in q.order_by
        )
        parts.append(f"ORDER BY {conds}")
    if q.limit is not None:
        parts.append(f"LIMIT {q.limit}")
    if q.offset is not None:
        parts.append(f"OFFSET {q.offset}")
    return "\n".join(parts)


__all__ = ["serialize_query", "serialize_expr"]
