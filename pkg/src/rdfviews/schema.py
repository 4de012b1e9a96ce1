"""Schema summaries of a dataset and the diagrams drawn from them.

A summary collects, for a dataset D and an RDFS rendering MO of an ontology:

* C   classes used in D (objects of rdf:type);
* C'  classes one subclass hop away from a used class in D or MO, minus C;
* P1  (c1, p, c2) whenever an instance of c1 has p pointing to an instance of c2;
* P2  (c, c1) subclass arcs in D or MO touching a used class;
* P3  (p, c) when an instance of c has p pointing at something without a type.

:func:`build_summary` computes these directly from the indexes.  The same
sets are also expressed as bundled queries (``data/schema/summary_*.rq``)
and :func:`summary_by_queries` evaluates those with the query engine, so
the two can be checked against each other.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from html import escape

from .algebra import eval_query
from .graph import Dataset, Graph
from .resources import list_data, read_data
from .sparql.parser import parse_query
from .trig import parse_trig
from .terms import (
    DEFAULT_PREFIXES,
    RDF_TYPE,
    RDFS_SUBCLASSOF,
    TERMS,
    IRI,
    shorten,
    term_key,
)

SCHEMA_D = IRI("urn:x-schema:D")
SCHEMA_MO = IRI("urn:x-schema:MO")

LIGHT_GREY = "#d3d3d3"
DARK_GREY = "#808080"


@dataclass
class SchemaSummary:
    used_classes: set = field(default_factory=set)
    mo_related_classes: set = field(default_factory=set)
    predicate_edges: set = field(default_factory=set)
    subclass_edges: set = field(default_factory=set)
    literal_predicates: set = field(default_factory=set)

    # short aliases
    @property
    def C(self):
        return self.used_classes

    @property
    def C_prime(self):
        return self.mo_related_classes

    @property
    def P1(self):
        return self.predicate_edges

    @property
    def P2(self):
        return self.subclass_edges

    @property
    def P3(self):
        return self.literal_predicates


def owl2rdfs_queries() -> list:
    """``(file name, Query)`` for each bundled OWL-to-RDFS extraction query."""
    return [(name, parse_query(read_data("schema", name))) for name in list_data("schema", ".rq")
            if name.startswith("owl2rdfs_")]


def extract_rdfs_from_owl(ont: Graph) -> Graph:
    """RDFS statements readable off an OWL ontology (no inference)."""
    ds = Dataset(ont)
    out: set = set()
    for _, q in owl2rdfs_queries():
        out |= eval_query(q, ds).id_triples()
    return Graph.from_ids(out)


def bundled_ontology() -> Graph:
    """The bundled OWL subset of the Music Ontology (not yet distilled)."""
    return parse_trig(read_data("schema", "mo_subset.trig"))[0].default_graph


def _union(d: Dataset) -> Graph:
    parts = [d.default_graph.id_triples()] + [g.id_triples() for g in d.named.values()]
    return Graph.from_ids(set().union(*parts))


def build_summary(d: Dataset, mo: Graph) -> SchemaSummary:
    """Summarize every graph of ``d`` (merged) against the RDFS graph ``mo``."""
    data = _union(d)
    both = Graph.from_ids(data.id_triples() | mo.id_triples())
    term = TERMS.term
    type_id = TERMS.intern(RDF_TYPE)
    sc_id = TERMS.intern(RDFS_SUBCLASSOF)

    types: dict = {}
    for s, _, o in data.match_ids(p=type_id):
        types.setdefault(s, set()).add(o)
    used = set().union(*types.values()) if types else set()

    p1, p3 = set(), set()
    for s, p, o in data.id_triples():
        s_types = types.get(s)
        if not s_types:
            continue
        o_types = types.get(o)
        for c1 in s_types:
            if o_types:
                for c2 in o_types:
                    p1.add((term(c1), term(p), term(c2)))
            else:
                p3.add((term(p), term(c1)))

    related, p2 = set(), set()
    for c, _, c1 in both.match_ids(p=sc_id):
        if c in used:
            related.add(c1)
            p2.add((term(c), term(c1)))
        if c1 in used:
            related.add(c)
            p2.add((term(c), term(c1)))

    return SchemaSummary(
        used_classes={term(c) for c in used},
        mo_related_classes={term(c) for c in related - used},
        predicate_edges=p1,
        subclass_edges=p2,
        literal_predicates=p3,
    )


def summary_by_queries(d: Dataset, mo: Graph) -> SchemaSummary:
    """The same summary, computed by running the bundled queries."""
    ds = Dataset(Graph(), {SCHEMA_D: _union(d), SCHEMA_MO: mo})

    def run(name):
        return eval_query(parse_query(read_data("schema", name)), ds)

    used = {row[0] for row in run("summary_c.rq").rows}
    related = {row[0] for row in run("summary_cprime.rq").rows} - used
    p1 = {tuple(t) for t in run("summary_p1.rq")}
    p2 = {(t.subject, t.object) for t in run("summary_p2.rq")}
    p3 = {tuple(row) for row in run("summary_p3.rq").rows}
    return SchemaSummary(used, related, p1, p2, p3)


def _node_id(t) -> str:
    return '"' + t.n3().replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(s: SchemaSummary, prefixes=None) -> str:
    """Graphviz document for a summary; output depends only on the summary."""
    prefixes = DEFAULT_PREFIXES if prefixes is None else prefixes
    short = lambda t: shorten(t, prefixes)  # noqa: E731
    literal_preds: dict = {}
    for p, c in s.literal_predicates:
        literal_preds.setdefault(c, []).append(p)

    lines = ["digraph schema {"]
    nodes = [(c, LIGHT_GREY) for c in s.used_classes]
    nodes += [(c, DARK_GREY) for c in s.mo_related_classes if c not in s.used_classes]
    for c, colour in sorted(nodes, key=lambda n: term_key(n[0])):
        label = escape(short(c))
        extra = sorted(literal_preds.get(c, ()), key=term_key)
        if extra:
            label += "".join(f"<br/><i>{escape(short(p))}</i>" for p in extra)
        font = ', fontcolor="white"' if colour == DARK_GREY else ""
        lines.append(f'  {_node_id(c)} [shape=box, style=filled, fillcolor="{colour}"{font}, label=<{label}>];')
    for c1, p, c2 in sorted(s.predicate_edges, key=lambda e: tuple(map(term_key, e))):
        lines.append(f'  {_node_id(c1)} -> {_node_id(c2)} [label="{short(p)}"];')
    for c, c1 in sorted(s.subclass_edges, key=lambda e: tuple(map(term_key, e))):
        lines.append(f"  {_node_id(c)} -> {_node_id(c1)} [style=dashed];")
    lines.append("}")
    return "\n".join(lines) + "\n"


__all__ = [
    "SchemaSummary",
    "build_summary",
    "bundled_ontology",
    "summary_by_queries",
    "extract_rdfs_from_owl",
    "owl2rdfs_queries",
    "to_dot",
]
