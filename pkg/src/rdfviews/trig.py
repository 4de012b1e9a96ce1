"""Reader for the TriG subset used by view-definition documents.

Supported: ``@prefix``/``PREFIX`` and ``@base``/``BASE`` directives,
``name { ... }`` and ``GRAPH name { ... }`` blocks, bare ``{ ... }`` blocks
and bare statements (both go to the default graph), predicate/object lists
with ``;`` and ``,``, typed and language-tagged literals.  Nested graphs and
collections are not supported.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .graph import Dataset, Graph
from .lexer import ParseError, TokenStream, resolve_iri
from .terms import (
    RDF_TYPE,
    XSD,
    XSD_DECIMAL,
    XSD_INTEGER,
    IRI,
    Literal,
    Term,
    TermError,
    fresh_bnode,
)

DEFAULT_BASE = "http://localhost/"


@dataclass(frozen=True)
class GraphBlock:
    """One ``name { ... }`` block as written in the source document."""

    name: Optional[IRI]
    text: str
    graph: Graph
    prefixes: tuple = ()  # (prefix, namespace) pairs in force at the block


class _TrigReader:
    def __init__(self, text: str, prefixes: Optional[dict], base: str):
        self.ts = TokenStream(text)
        self.prefixes = dict(prefixes or {})
        self.base = base
        self.bnodes: dict = {}

    # -- terms ---------------------------------------------------------------

    def iri(self, value: str) -> IRI:
        return IRI(resolve_iri(self.base, value) if self.base else value)

    def pname(self, tok) -> IRI:
        if tok.extra not in self.prefixes:
            raise self.ts.error(f"unknown prefix {tok.extra + ':'!r}", tok)
        return IRI(self.prefixes[tok.extra] + tok.value)

    def term(self, position: str) -> Term:
        ts = self.ts
        tok = ts.next()
        if tok.kind == "IRIREF":
            return self.iri(tok.value)
        if tok.kind == "PNAME":
            return self.pname(tok)
        if tok.kind == "BNODE":
            if tok.value not in self.bnodes:
                self.bnodes[tok.value] = fresh_bnode()
            return self.bnodes[tok.value]
        if tok.kind == "PUNCT" and tok.value == "[" and ts.accept("PUNCT", "]"):
            return fresh_bnode()
        if position == "predicate" and tok.kind == "NAME" and tok.value == "a":
            return RDF_TYPE
        if tok.kind == "STRING":
            if ts.at("LANGTAG"):
                return Literal(tok.value, language=ts.next().value)
            if ts.accept("DTYPE"):
                dt = ts.next()
                if dt.kind == "IRIREF":
                    return Literal(tok.value, self.iri(dt.value).value)
                if dt.kind == "PNAME":
                    return Literal(tok.value, self.pname(dt).value)
                raise ts.error("expected datatype IRI", dt)
            return Literal(tok.value)
        if tok.kind == "NUMBER":
            return Literal(tok.value, XSD_DECIMAL if "." in tok.value else XSD_INTEGER)
        if tok.kind == "NAME" and tok.value in ("true", "false"):
            return Literal(tok.value, XSD + "boolean")
        raise ts.error(f"unexpected {tok.value or tok.kind!r} in {position} position", tok)

    # -- statements ----------------------------------------------------------

    def triples(self, subject: Term, graph: Graph) -> None:
        ts = self.ts
        while True:
            pred_tok = ts.peek()
            pred = self.term("predicate")
            while True:
                obj_tok = ts.peek()
                obj = self.term("object")
                try:
                    graph.add(subject, pred, obj)
                except TermError as e:
                    raise ts.error(str(e), obj_tok if isinstance(pred, IRI) else pred_tok) from None
                if not ts.accept("PUNCT", ","):
                    break
            if not ts.accept("PUNCT", ";"):
                return
            if ts.at("PUNCT", ".") or ts.at("PUNCT", "}") or ts.at("PUNCT", ";"):
                while ts.accept("PUNCT", ";"):
                    pass
                return

    def block_body(self, graph: Graph) -> None:
        ts = self.ts
        while not ts.at("PUNCT", "}"):
            if ts.at("EOF"):
                raise ts.error("unterminated graph block")
            subject = self.term("subject")
            self.triples(subject, graph)
            if not ts.accept("PUNCT", "."):
                if not ts.at("PUNCT", "}"):
                    raise ts.error("expected '.' or '}'")
        ts.expect("PUNCT", "}")

    def directive(self) -> bool:
        ts = self.ts
        tok = ts.peek()
        if tok.kind == "LANGTAG" and tok.value in ("prefix", "base"):
            ts.next()
            self._directive_body(tok.value)
            ts.expect("PUNCT", ".")
            return True
        if tok.kind == "NAME" and tok.value.upper() in ("PREFIX", "BASE"):
            ts.next()
            self._directive_body(tok.value.lower())
            return True
        return False

    def _directive_body(self, which: str) -> None:
        ts = self.ts
        if which == "prefix":
            name = ts.expect("PNAME")
            if name.value:
                raise ts.error("prefix declaration must end with ':'", name)
            self.prefixes[name.extra] = self.iri(ts.expect("IRIREF").value).value
        else:
            self.base = self.iri(ts.expect("IRIREF").value).value

    def document(self):
        ts = self.ts
        dataset = Dataset()
        blocks = []
        while not ts.at("EOF"):
            if self.directive():
                continue
            start = ts.peek().pos
            if ts.accept_keyword("GRAPH"):
                name = self.term("subject")
                if not isinstance(name, IRI):
                    raise ts.error("graph name must be an IRI")
                self._block(name, start, dataset, blocks)
                continue
            if ts.at("PUNCT", "{"):
                self._block(None, start, dataset, blocks)
                continue
            subject = self.term("subject")
            if ts.at("PUNCT", "{"):
                if not isinstance(subject, IRI):
                    raise ts.error("graph name must be an IRI")
                self._block(subject, start, dataset, blocks)
                continue
            self.triples(subject, dataset.default_graph)
            ts.expect("PUNCT", ".")
        return dataset, blocks

    def _block(self, name, start, dataset, blocks):
        ts = self.ts
        ts.expect("PUNCT", "{")
        graph = Graph()
        self.block_body(graph)
        end = ts.tokens[ts.i - 1].end
        blocks.append(GraphBlock(name, ts.text[start:end], graph, tuple(sorted(self.prefixes.items()))))
        if name is None:
            dataset.default_graph.update_ids(graph.id_triples())
        else:
            dataset.add_named(name, graph)


def read_trig(text: str, prefixes: Optional[dict] = None, base: str = DEFAULT_BASE):
    """Like :func:`parse_trig` but also returns the final prefix map."""
    reader = _TrigReader(text, prefixes, base)
    try:
        dataset, blocks = reader.document()
    except TermError as e:
        raise ParseError(str(e)) from None
    return dataset, blocks, reader.prefixes


def parse_trig(text: str, prefixes: Optional[dict] = None, base: str = DEFAULT_BASE):
    """Parse a TriG document into ``(Dataset, [GraphBlock, ...])``.

    Blocks sharing a graph name are merged (set union) in the dataset but are
    reported individually, in document order, with their raw source text.
    """
    dataset, blocks, _ = read_trig(text, prefixes, base)
    return dataset, blocks


def serialize_trig(dataset: Dataset) -> str:
    """TriG with full IRIs: the default graph first, then named graphs by IRI.

    Statement order inside a block is the N-Triples order.
    """
    from .ntriples import serialize_ntriples

    out = []
    if len(dataset.default_graph):
        out.append("{\n" + serialize_ntriples(dataset.default_graph) + "}\n")
    for name in sorted(dataset.named, key=lambda i: i.value):
        out.append(f"{name.n3()} {{\n" + serialize_ntriples(dataset.named[name]) + "}\n")
    return "".join(out)


__all__ = ["GraphBlock", "parse_trig", "read_trig", "serialize_trig", "DEFAULT_BASE"]
