"""RDF terms, triples and the process-wide term dictionary.

Terms are small frozen value objects.  Graph indexes never store them
directly: every term is interned once in :data:`TERMS` and referred to by an
integer id, which keeps the permutation indexes compact and makes joins cheap.
"""

from __future__ import annotations

import itertools
import re
import threading
from dataclasses import dataclass
from typing import Optional, Union

_WS = re.compile(r"\s")


class TermError(ValueError):
    """An ill-formed term or a term in a position it may not occupy."""


@dataclass(frozen=True, slots=True)
class IRI:
    value: str

    def __post_init__(self):
        if not isinstance(self.value, str) or not self.value:
            raise TermError("IRI must be a non-empty string")
        if _WS.search(self.value):
            raise TermError(f"IRI contains whitespace: {self.value!r}")

    def n3(self) -> str:
        return f"<{self.value}>"

    def __str__(self):
        return self.value


@dataclass(frozen=True, slots=True)
class BNode:
    label: str

    def __post_init__(self):
        if not isinstance(self.label, str) or not self.label or _WS.search(self.label):
            raise TermError(f"bad blank node label: {self.label!r}")

    def n3(self) -> str:
        return f"_:{self.label}"

    def __str__(self):
        return self.n3()


@dataclass(frozen=True, slots=True)
class Literal:
    lexical: str
    datatype: Optional[str] = None
    language: Optional[str] = None

    def __post_init__(self):
        if not isinstance(self.lexical, str):
            raise TermError("literal lexical form must be a string")
        if self.datatype is not None and self.language is not None:
            raise TermError("a literal cannot carry both a datatype and a language tag")
        if self.datatype is not None and (not self.datatype or _WS.search(self.datatype)):
            raise TermError(f"bad datatype IRI: {self.datatype!r}")

    def n3(self) -> str:
        out = '"' + escape_string(self.lexical) + '"'
        if self.language:
            return out + "@" + self.language
        if self.datatype:
            return out + "^^<" + self.datatype + ">"
        return out

    def int_value(self) -> Optional[int]:
        """Integer value if the lexical form is an integer, else None."""
        if _INT.fullmatch(self.lexical):
            return int(self.lexical)
        return None

    def __str__(self):
        return self.lexical


Term = Union[IRI, BNode, Literal]

_INT = re.compile(r"[+-]?\d+")

_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\r": "\\r", "\t": "\\t"}


def escape_string(s: str) -> str:
    out = []
    for ch in s:
        if ch in _ESCAPES:
            out.append(_ESCAPES[ch])
        elif ord(ch) < 0x20 or ord(ch) == 0x7F:
            out.append(f"\\u{ord(ch):04X}")
        else:
            out.append(ch)
    return "".join(out)


# Rank of each term class in the total term order: IRIs, then blank nodes,
# then literals.
KIND_IRI, KIND_BNODE, KIND_LITERAL = 0, 1, 2


def kind_of(term: Term) -> int:
    if isinstance(term, IRI):
        return KIND_IRI
    if isinstance(term, BNode):
        return KIND_BNODE
    if isinstance(term, Literal):
        return KIND_LITERAL
    raise TermError(f"not an RDF term: {term!r}")


def term_key(term: Term) -> tuple:
    """Sort key implementing the total term order used for serialization."""
    if isinstance(term, IRI):
        return (KIND_IRI, term.value)
    if isinstance(term, BNode):
        return (KIND_BNODE, term.label)
    return (KIND_LITERAL, term.lexical, term.datatype or "", term.language or "")


def check_triple(s: Term, p: Term, o: Term) -> None:
    if not isinstance(s, (IRI, BNode)):
        raise TermError(f"subject must be an IRI or blank node, got {s!r}")
    if not isinstance(p, IRI):
        raise TermError(f"predicate must be an IRI, got {p!r}")
    if not isinstance(o, (IRI, BNode, Literal)):
        raise TermError(f"object must be an RDF term, got {o!r}")


@dataclass(frozen=True, slots=True)
class Triple:
    subject: Term
    predicate: Term
    object: Term

    def __post_init__(self):
        check_triple(self.subject, self.predicate, self.object)

    def __iter__(self):
        return iter((self.subject, self.predicate, self.object))

    def n3(self) -> str:
        return f"{self.subject.n3()} {self.predicate.n3()} {self.object.n3()} ."


class TermTable:
    """Append-only dictionary mapping terms to dense integer ids."""

    def __init__(self):
        self._ids: dict = {}
        self._terms: list = []
        self.kinds = bytearray()
        self._lock = threading.Lock()

    def intern(self, term: Term) -> int:
        tid = self._ids.get(term)
        if tid is not None:
            return tid
        kind = kind_of(term)
        with self._lock:
            tid = self._ids.get(term)
            if tid is None:
                tid = len(self._terms)
                self._terms.append(term)
                self.kinds.append(kind)
                self._ids[term] = tid
        return tid

    def lookup(self, term: Term) -> Optional[int]:
        """Id of an already interned term, or None."""
        return self._ids.get(term)

    def term(self, tid: int) -> Term:
        return self._terms[tid]

    def __len__(self):
        return len(self._terms)


TERMS = TermTable()

_fresh_counter = itertools.count()


def fresh_bnode() -> BNode:
    """A blank node whose label is unique within this process."""
    return BNode(f"genid{next(_fresh_counter)}")


# ---------------------------------------------------------------------------
# Vocabulary

RDF = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS = "http://www.w3.org/2000/01/rdf-schema#"
OWL = "http://www.w3.org/2002/07/owl#"
XSD = "http://www.w3.org/2001/XMLSchema#"
FOAF = "http://xmlns.com/foaf/0.1/"
MO = "http://purl.org/ontology/mo/"
DC = "http://purl.org/dc/elements/1.1/"
EVENT = "http://purl.org/NET/c4dm/event.owl#"
BIO = "http://purl.org/vocab/bio/0.1/"
NG = "http://networkedgraphs.example.org/ns#"
DEF = "http://definedViews/"
DBTUNE = "http://dbtune.org/"

DEFAULT_PREFIXES = {
    "rdf": RDF,
    "rdfs": RDFS,
    "owl": OWL,
    "xsd": XSD,
    "foaf": FOAF,
    "mo": MO,
    "dc": DC,
    "event": EVENT,
    "bio": BIO,
    "ng": NG,
    "def": DEF,
    "dbtune": DBTUNE,
}

RDF_TYPE = IRI(RDF + "type")
RDF_PROPERTY = IRI(RDF + "Property")
RDFS_SUBCLASSOF = IRI(RDFS + "subClassOf")
RDFS_SUBPROPERTYOF = IRI(RDFS + "subPropertyOf")
RDFS_DOMAIN = IRI(RDFS + "domain")
RDFS_RANGE = IRI(RDFS + "range")
XSD_INTEGER = XSD + "integer"
XSD_DECIMAL = XSD + "decimal"
NG_DEFINEDBY = IRI(NG + "definedBy")
NG_QUERY = NG + "query"


def shorten(term: Term, prefixes: Optional[dict] = None) -> str:
    """Compact display form (prefixed name when a prefix matches)."""
    if isinstance(term, IRI):
        for prefix, ns in (prefixes or DEFAULT_PREFIXES).items():
            if term.value.startswith(ns) and len(term.value) > len(ns):
                return f"{prefix}:{term.value[len(ns):]}"
        return term.n3()
    return term.n3()
