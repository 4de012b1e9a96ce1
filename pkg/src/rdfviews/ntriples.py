"""N-Triples reading and writing."""

from __future__ import annotations

import re
from typing import Iterable, Union

from .graph import Graph
from .lexer import ParseError, unescape
from .terms import TERMS, IRI, Literal, Triple, fresh_bnode, term_key

_IRI = r"<([^<>\"{}|^`\\\x00-\x20]*)>"
_BNODE = r"_:([A-Za-z0-9_](?:[\w.-]*[\w-])?)"
_LITERAL = r"\"((?:[^\"\\\n]|\\.)*)\"(?:@([a-zA-Z]+(?:-[a-zA-Z0-9]+)*)|\^\^<([^<>\"{}|^`\\\x00-\x20]*)>)?"

_LINE = re.compile(
    rf"[ \t]*(?:{_IRI}|{_BNODE})[ \t]*{_IRI}[ \t]*(?:{_IRI}|{_BNODE}|{_LITERAL})[ \t]*\.[ \t]*(?:#.*)?$"
)
_BLANK = re.compile(r"[ \t]*(?:#.*)?$")
_EOL = re.compile(r"\r\n?|\n")


def parse_ntriples(source: Union[str, Iterable[str]], graph: Graph = None, bnodes: dict = None) -> Graph:
    """Parse an N-Triples document (text or iterable of lines) into a Graph.

    Blank-node labels are scoped to the document: each distinct label maps to
    a process-unique blank node, so two documents never share blank nodes.
    Passing the same ``bnodes`` dict to several calls shares one scope
    across them.
    """
    # only CR and LF end a statement; str.splitlines would also break on
    # characters such as U+0085 that may appear raw inside literals
    lines = _EOL.split(source) if isinstance(source, str) else source
    graph = graph if graph is not None else Graph()
    intern = TERMS.intern
    iri_ids: dict = {}
    bnodes = {} if bnodes is None else bnodes
    out = []

    def iri_id(value):
        tid = iri_ids.get(value)
        if tid is None:
            tid = iri_ids[value] = intern(IRI(unescape(value) if "\\" in value else value))
        return tid

    def bnode_id(label):
        tid = bnodes.get(label)
        if tid is None:
            tid = bnodes[label] = intern(fresh_bnode())
        return tid

    for lineno, line in enumerate(lines, 1):
        m = _LINE.match(line)
        if m is None:
            if _BLANK.match(line):
                continue
            if line.lstrip().startswith('"'):
                raise ParseError("literal in subject position", lineno, 1)
            raise ParseError(f"malformed N-Triples statement: {line.strip()[:80]!r}", lineno, 1)
        s_iri, s_bn, p_iri, o_iri, o_bn, lex, lang, dt = m.groups()
        s = iri_id(s_iri) if s_iri is not None else bnode_id(s_bn)
        p = iri_id(p_iri)
        if o_iri is not None:
            o = iri_id(o_iri)
        elif o_bn is not None:
            o = bnode_id(o_bn)
        else:
            try:
                o = intern(Literal(unescape(lex) if "\\" in lex else lex, dt, lang))
            except ValueError as e:
                raise ParseError(str(e), lineno, 1) from None
        out.append((s, p, o))
    graph.update_ids(out)
    return graph


def serialize_triple(t: Triple) -> str:
    return f"{t.subject.n3()} {t.predicate.n3()} {t.object.n3()} ."


def serialize_ntriples(graph: Graph) -> str:
    """Deterministic N-Triples: one statement per line in total term order."""
    term = TERMS.term
    keyed = []
    key_cache: dict = {}

    def key(tid):
        k = key_cache.get(tid)
        if k is None:
            k = key_cache[tid] = term_key(term(tid))
        return k

    for s, p, o in graph.id_triples():
        keyed.append(((key(s), key(p), key(o)), (s, p, o)))
    keyed.sort(key=lambda kv: kv[0])
    lines = [f"{term(s).n3()} {term(p).n3()} {term(o).n3()} .\n" for _, (s, p, o) in keyed]
    return "".join(lines)


def write_ntriples(graph: Graph, fh) -> None:
    fh.write(serialize_ntriples(graph))


__all__ = ["parse_ntriples", "serialize_ntriples", "serialize_triple", "write_ntriples"]
