"""Recursive-descent parser for the supported query language.

The grammar is documented in ``docs/grammar.ebnf``.  Besides standard
SPARQL 1.0 SELECT/CONSTRUCT/ASK it accepts two inline-view dataset clauses,
``FROM ( CONSTRUCT ... )`` and ``FROM NAMED <iri> [ CONSTRUCT ... ]``, and
string literals written with TeX-style or typographic quotes.
"""

from __future__ import annotations

import itertools
import os
from typing import Optional

from ..lexer import ParseError, TokenStream, resolve_iri
from ..terms import (
    DEFAULT_PREFIXES,
    NG_DEFINEDBY,
    NG_QUERY,
    RDF_TYPE,
    XSD,
    XSD_DECIMAL,
    XSD_INTEGER,
    IRI,
    BNode,
    Literal,
    TermError,
)
from ..trig import DEFAULT_BASE, read_trig
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
    OrderCondition,
    Prologue,
    Query,
    Regex,
    Select,
    Str,
    TriplePattern,
    Union_,
    Var,
)

_FORMS = ("SELECT", "CONSTRUCT", "ASK", "DESCRIBE")


def engine_prefixes() -> dict:
    """Default prefix table, extended by ``RDFVIEWS_PREFIXES`` if set.

    The variable holds ``name=namespace`` pairs separated by commas or
    whitespace.
    """
    table = dict(DEFAULT_PREFIXES)
    extra = os.environ.get("RDFVIEWS_PREFIXES", "")
    for item in extra.replace(",", " ").split():
        name, sep, ns = item.partition("=")
        if sep and ns:
            table[name.rstrip(":")] = ns
    return table


class _QueryParser:
    def __init__(self, text: str, prefixes: dict, base: Optional[str]):
        self.ts = TokenStream(text)
        self.prefixes = prefixes
        self.base = base
        self._anon = itertools.count()

    # -- terms ---------------------------------------------------------------

    def iri(self, value: str) -> IRI:
        return IRI(resolve_iri(self.base or DEFAULT_BASE, value))

    def pname(self, tok) -> IRI:
        ns = self.prefixes.get(tok.extra)
        if ns is None:
            raise self.ts.error(f"unknown prefix {tok.extra + ':'!r}", tok)
        return IRI(ns + tok.value)

    def iri_token(self, tok) -> IRI:
        if tok.kind == "IRIREF":
            return self.iri(tok.value)
        if tok.kind == "PNAME":
            return self.pname(tok)
        raise self.ts.error(f"expected an IRI, found {tok.value or tok.kind!r}", tok)

    def literal_rest(self, lexical: str) -> Literal:
        ts = self.ts
        if ts.at("LANGTAG"):
            return Literal(lexical, language=ts.next().value)
        if ts.accept("DTYPE"):
            return Literal(lexical, self.iri_token(ts.next()).value)
        return Literal(lexical)

    def term(self, position: str):
        """A term or variable in a triple pattern."""
        ts = self.ts
        tok = ts.next()
        kind = tok.kind
        if kind == "VAR":
            return Var(tok.value)
        if kind in ("IRIREF", "PNAME"):
            return self.iri_token(tok)
        if position == "predicate":
            if kind == "NAME" and tok.value == "a":
                return RDF_TYPE
            raise ts.error(f"predicate must be an IRI or variable, found {tok.value or kind!r}", tok)
        if kind == "BNODE":
            return BNode(tok.value)
        if kind == "PUNCT" and tok.value == "[":
            ts.expect("PUNCT", "]")
            return BNode(f"anon{next(self._anon)}")
        if kind == "STRING":
            return self.literal_rest(tok.value)
        if kind == "NUMBER":
            return Literal(tok.value, XSD_DECIMAL if "." in tok.value else XSD_INTEGER)
        if kind == "NAME" and tok.value in ("true", "false"):
            return Literal(tok.value, XSD + "boolean")
        raise ts.error(f"unexpected {tok.value or kind!r} in {position} position", tok)

    # -- triples -------------------------------------------------------------

    def triples_same_subject(self, out: list) -> None:
        ts = self.ts
        subject = self.term("subject")
        while True:
            pred = self.term("predicate")
            while True:
                out.append(TriplePattern(subject, pred, self.term("object")))
                if not ts.accept("PUNCT", ","):
                    break
            if not ts.accept("PUNCT", ";"):
                return
            while ts.accept("PUNCT", ";"):
                pass
            if ts.at("PUNCT", ".") or ts.at("PUNCT", "}") or self._at_pattern_keyword():
                return

    def _at_triple_start(self) -> bool:
        tok = self.ts.peek()
        if tok.kind in ("VAR", "IRIREF", "PNAME", "BNODE", "STRING", "NUMBER"):
            return True
        if tok.kind == "PUNCT" and tok.value == "[":
            return True
        return tok.kind == "NAME" and tok.value in ("true", "false")

    def _at_pattern_keyword(self) -> bool:
        return self.ts.at_keyword("FILTER", "OPTIONAL", "GRAPH")

    def template(self) -> tuple:
        ts = self.ts
        ts.expect("PUNCT", "{")
        out: list = []
        while not ts.accept("PUNCT", "}"):
            self.triples_same_subject(out)
            if not ts.accept("PUNCT", "."):
                ts.expect("PUNCT", "}")
                break
        return tuple(out)

    # -- graph patterns ------------------------------------------------------

    def group(self):
        """Parse ``{ ... }``; returns the normalized pattern."""
        ts = self.ts
        ts.expect("PUNCT", "{")
        members: list = []
        filters: list = []
        pending: Optional[list] = None  # triples of the BGP being built

        def flush():
            nonlocal pending
            if pending is not None:
                members.append(Bgp(tuple(pending)))
                pending = None

        while not ts.accept("PUNCT", "}"):
            if ts.at("EOF"):
                raise ts.error("unterminated group")
            if ts.accept("PUNCT", "."):
                continue
            if ts.accept_keyword("FILTER"):
                filters.append(self.constraint())
                continue
            if ts.accept_keyword("OPTIONAL"):
                flush()
                members.append(Optional_(self.group()))
                continue
            if ts.accept_keyword("GRAPH"):
                flush()
                tok = ts.next()
                name = Var(tok.value) if tok.kind == "VAR" else self.iri_token(tok)
                members.append(GraphAt(name, self.group()))
                continue
            if ts.at("PUNCT", "{"):
                flush()
                node = self.group()
                while ts.accept_keyword("UNION"):
                    node = Union_(node, self.group())
                members.append(node)
                continue
            if self._at_triple_start():
                if pending is None:
                    pending = []
                self.triples_same_subject(pending)
                if not (ts.at("PUNCT", ".") or ts.at("PUNCT", "}") or self._at_pattern_keyword()
                        or ts.at("PUNCT", "{")):
                    raise ts.error("expected '.' or '}' after triple pattern")
                continue
            tok = ts.peek()
            raise ts.error(f"unexpected {tok.value or tok.kind!r} in group pattern")
        flush()

        if not members:
            inner = Bgp(())
        elif len(members) == 1 and not isinstance(members[0], Optional_):
            inner = members[0]
        else:
            inner = Group(tuple(members))
        if filters:
            expr = filters[0]
            for f in filters[1:]:
                expr = And(expr, f)
            inner = Filtered(inner, expr)
        return inner

    # -- expressions ---------------------------------------------------------

    def constraint(self):
        ts = self.ts
        if ts.at("PUNCT", "("):
            ts.next()
            e = self.expression()
            ts.expect("PUNCT", ")")
            return e
        return self.builtin_call()

    def expression(self):
        left = self.and_expr()
        while self.ts.accept("OP", "||"):
            left = Or(left, self.and_expr())
        return left

    def and_expr(self):
        left = self.relational()
        while self.ts.accept("OP", "&&"):
            left = And(left, self.relational())
        return left

    def relational(self):
        left = self.unary()
        tok = self.ts.peek()
        if tok.kind == "OP" and tok.value in ("=", "!=", "<", ">", "<=", ">="):
            self.ts.next()
            return Compare(tok.value, left, self.unary())
        return left

    def unary(self):
        if self.ts.accept("OP", "!"):
            return Not(self.unary())
        return self.primary()

    def primary(self):
        ts = self.ts
        tok = ts.peek()
        if tok.kind == "PUNCT" and tok.value == "(":
            ts.next()
            e = self.expression()
            ts.expect("PUNCT", ")")
            return e
        if tok.kind == "VAR":
            ts.next()
            return Var(tok.value)
        if tok.kind == "NAME" and tok.value.upper() in ("BOUND", "ISIRI", "ISURI", "REGEX", "STR"):
            return self.builtin_call()
        if tok.kind in ("IRIREF", "PNAME"):
            ts.next()
            return Const(self.iri_token(tok))
        if tok.kind == "STRING":
            ts.next()
            return Const(self.literal_rest(tok.value))
        if tok.kind == "NUMBER":
            ts.next()
            return Const(Literal(tok.value, XSD_DECIMAL if "." in tok.value else XSD_INTEGER))
        if tok.kind == "NAME" and tok.value in ("true", "false"):
            ts.next()
            return Const(Literal(tok.value, XSD + "boolean"))
        raise ts.error(f"unexpected {tok.value or tok.kind!r} in expression")

    def builtin_call(self):
        ts = self.ts
        tok = ts.next()
        name = tok.value.upper() if tok.kind == "NAME" else ""
        if name not in ("BOUND", "ISIRI", "ISURI", "REGEX", "STR"):
            raise ts.error(f"unsupported function {tok.value or tok.kind!r}", tok)
        ts.expect("PUNCT", "(")
        if name == "BOUND":
            v = ts.expect("VAR")
            result = Bound(Var(v.value))
        elif name in ("ISIRI", "ISURI"):
            result = IsIri(self.expression())
        elif name == "STR":
            result = Str(self.expression())
        else:
            arg = self.expression()
            ts.expect("PUNCT", ",")
            pattern = ts.expect("STRING").value
            flags = ""
            if ts.accept("PUNCT", ","):
                ftok = ts.expect("STRING")
                flags = ftok.value
                if flags not in ("", "i"):
                    raise ts.error(f"unsupported regex flags {flags!r}", ftok)
            result = Regex(arg, pattern, flags)
        ts.expect("PUNCT", ")")
        return result

    # -- queries -------------------------------------------------------------

    def prologue(self) -> Prologue:
        ts = self.ts
        declared = []
        base = None
        while True:
            if ts.accept_keyword("BASE"):
                base = self.iri(ts.expect("IRIREF").value).value
                self.base = base
            elif ts.accept_keyword("PREFIX"):
                name = ts.expect("PNAME")
                if name.value:
                    raise ts.error("prefix declaration must end with ':'", name)
                ns = self.iri(ts.expect("IRIREF").value).value
                self.prefixes[name.extra] = ns
                declared.append((name.extra, ns))
            else:
                return Prologue(base, tuple(declared))

    def query(self, prologue: Prologue, construct_only: bool = False) -> Query:
        ts = self.ts
        tok = ts.peek()
        word = tok.value.upper() if tok.kind == "NAME" else ""
        if word not in _FORMS:
            raise ts.error(f"expected a query form, found {tok.value or tok.kind!r}")
        if word == "DESCRIBE":
            raise ts.error("unsupported form: DESCRIBE")
        if construct_only and word != "CONSTRUCT":
            raise ts.error("inline views must be CONSTRUCT queries")
        ts.next()
        if word == "SELECT":
            distinct = bool(ts.accept_keyword("DISTINCT"))
            if ts.accept("PUNCT", "*"):
                form = Select(None, distinct)
            else:
                names = []
                while ts.at("VAR"):
                    names.append(Var(ts.next().value))
                if not names:
                    raise ts.error("SELECT needs '*' or at least one variable")
                form = Select(tuple(names), distinct)
        elif word == "CONSTRUCT":
            form = Construct(self.template())
        else:
            form = Ask()

        dataset = []
        while ts.accept_keyword("FROM"):
            if ts.accept_keyword("NAMED"):
                name = self.iri_token(ts.next())
                if ts.accept("PUNCT", "["):
                    inner = self.query(Prologue(), construct_only=True)
                    ts.expect("PUNCT", "]")
                    dataset.append(FromNamedInline(name, inner))
                else:
                    dataset.append(FromNamed(name))
            elif ts.accept("PUNCT", "("):
                inner = self.query(Prologue(), construct_only=True)
                ts.expect("PUNCT", ")")
                dataset.append(FromInline(inner))
            else:
                dataset.append(From(self.iri_token(ts.next())))

        ts.accept_keyword("WHERE")
        pattern = self.group()

        order = []
        if ts.accept_keyword("ORDER"):
            ts.expect_keyword("BY")
            while True:
                if ts.at_keyword("ASC", "DESC"):
                    desc = ts.next().value.upper() == "DESC"
                    ts.expect("PUNCT", "(")
                    e = self.expression()
                    ts.expect("PUNCT", ")")
                    order.append(OrderCondition(e, desc))
                elif ts.at("VAR") or ts.at("PUNCT", "("):
                    order.append(OrderCondition(self.primary(), False))
                elif ts.at_keyword("BOUND", "ISIRI", "ISURI", "REGEX", "STR"):
                    order.append(OrderCondition(self.builtin_call(), False))
                else:
                    break
            if not order:
                raise ts.error("ORDER BY needs at least one condition")

        limit = offset = None
        while ts.at_keyword("LIMIT", "OFFSET"):
            which = ts.next().value.upper()
            num = ts.expect("NUMBER")
            if not num.value.isdigit():
                raise ts.error(f"{which} needs a non-negative integer", num)
            if which == "LIMIT":
                limit = int(num.value)
            else:
                offset = int(num.value)

        return Query(form, pattern, tuple(dataset), prologue, tuple(order), limit, offset)


def parse_query(text: str, prefixes: Optional[dict] = None, base: Optional[str] = None) -> Query:
    """Parse query text into a :class:`Query`.

    ``prefixes`` extends the engine default prefix table; declarations in
    the query's own prologue take precedence over both.
    """
    table = engine_prefixes()
    if prefixes:
        table.update(prefixes)
    p = _QueryParser(text, table, base)
    try:
        prologue = p.prologue()
        q = p.query(prologue)
        if not p.ts.at("EOF"):
            tok = p.ts.peek()
            raise p.ts.error(f"unexpected {tok.value or tok.kind!r} after query")
        return q
    except TermError as e:
        raise ParseError(str(e)) from None


def iter_view_defs(trig_text: str, prefixes: Optional[dict] = None):
    """Yield ``(name, query, source_text, block_prefixes)`` per graph block.

    Every block must contain exactly one ``ng:definedBy`` triple whose object
    is a literal typed ``ng:query`` holding a CONSTRUCT query.  Prefixes
    declared in the document before a block are visible inside its query.
    """
    table = engine_prefixes()
    if prefixes:
        table.update(prefixes)
    _, blocks, _ = read_trig(trig_text, table)
    for block in blocks:
        defs = [t for t in block.graph if t.predicate == NG_DEFINEDBY]
        label = block.name.n3() if block.name is not None else "default-graph block"
        if len(defs) != 1:
            raise ParseError(f"{label}: expected exactly one ng:definedBy triple, found {len(defs)}")
        t = defs[0]
        if not isinstance(t.subject, IRI):
            raise ParseError(f"{label}: view name must be an IRI")
        if block.name is not None and block.name != t.subject:
            raise ParseError(f"{label}: block name differs from view name {t.subject.n3()}")
        obj = t.object
        if not isinstance(obj, Literal) or obj.datatype != NG_QUERY:
            raise ParseError(f"{label}: ng:definedBy object must be a literal typed ng:query")
        block_prefixes = dict(block.prefixes)
        q = parse_query(obj.lexical, block_prefixes)
        if not q.is_construct:
            raise ParseError(f"{label}: view query must be a CONSTRUCT query")
        yield t.subject, q, obj.lexical, block_prefixes


def parse_view_def(trig_text: str, prefixes: Optional[dict] = None) -> list:
    """``(name, query)`` pairs of a TriG view-definition document, in block order."""
    return [(name, q) for name, q, _, _ in iter_view_defs(trig_text, prefixes)]


__all__ = ["parse_query", "parse_view_def", "iter_view_defs", "engine_prefixes"]
