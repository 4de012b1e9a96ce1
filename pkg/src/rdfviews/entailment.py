"""ρdf forward chaining.

Implements exactly six rules over rdfs:subPropertyOf (sp), rdfs:subClassOf
(sc), rdf:type, rdfs:domain and rdfs:range:

1. (A sp B), (B sp C)  =>  (A sp C)
2. (A sp B), (X A Y)   =>  (X B Y)
3. (A sc B), (B sc C)  =>  (A sc C)
4. (A sc B), (X type A) => (X type B)
5. (A domain C), (X A Y) => (X type C)
6. (A range D), (X A Y)  => (Y type D)

Every rule has at least one schema premise, so the worklist is seeded with
the schema triples of the base graph only; instance triples of the base
graph are reached through the indexes when their schema partner is
processed.  Derived triples all pass through the worklist (semi-naive: each
triple is joined once against everything known at that point).
"""

from __future__ import annotations

from collections import defaultdict, deque

from .graph import Graph
from .terms import (
    KIND_IRI,
    KIND_LITERAL,
    RDF_TYPE,
    RDFS_DOMAIN,
    RDFS_RANGE,
    RDFS_SUBCLASSOF,
    RDFS_SUBPROPERTYOF,
    TERMS,
)

SP, SC, TYPE, DOM, RANGE = RDFS_SUBPROPERTYOF, RDFS_SUBCLASSOF, RDF_TYPE, RDFS_DOMAIN, RDFS_RANGE
RHO_VOCABULARY = (SP, SC, TYPE, DOM, RANGE)


def _derive(graph: Graph) -> set:
    """Id triples entailed by ``graph`` but not contained in it."""
    sp, sc, typ, dom, rng = (TERMS.intern(t) for t in RHO_VOCABULARY)
    kinds = TERMS.kinds
    base = graph.id_triples()
    derived: set = set()
    derived_by_p: dict = defaultdict(list)
    derived_types: dict = defaultdict(list)  # class -> subjects typed by derivation
    sp_out, sp_in = defaultdict(set), defaultdict(set)
    sc_out, sc_in = defaultdict(set), defaultdict(set)
    domains, ranges = defaultdict(set), defaultdict(set)
    queue: deque = deque()

    def register(t):
        s, p, o = t
        if p == sp:
            sp_out[s].add(o)
            sp_in[o].add(s)
        elif p == sc:
            sc_out[s].add(o)
            sc_in[o].add(s)
        elif p == dom:
            domains[s].add(o)
        elif p == rng:
            ranges[s].add(o)

    def add(s, p, o):
        if kinds[s] == KIND_LITERAL or kinds[p] != KIND_IRI:
            return
        t = (s, p, o)
        if t in base or t in derived:
            return
        derived.add(t)
        derived_by_p[p].append(t)
        if p == typ:
            derived_types[o].append(s)
        register(t)
        queue.append(t)

    def with_predicate(p):
        yield from graph.match_ids(None, p, None)
        yield from list(derived_by_p.get(p, ()))

    def typed(c):
        for s, _, _ in graph.match_ids(None, typ, c):
            yield s
        yield from list(derived_types.get(c, ()))

    for p in (sp, sc, dom, rng):
        for t in graph.match_ids(None, p, None):
            register(t)
            queue.append(t)

    while queue:
        s, p, o = queue.popleft()
        if p == sp:
            for z in list(sp_out.get(o, ())):
                add(s, sp, z)
            for w in list(sp_in.get(s, ())):
                add(w, sp, o)
            for a, _, b in with_predicate(s):
                add(a, o, b)
        elif p == sc:
            for z in list(sc_out.get(o, ())):
                add(s, sc, z)
            for w in list(sc_in.get(s, ())):
                add(w, sc, o)
            for x in typed(s):
                add(x, typ, o)
        elif p == typ:
            for z in list(sc_out.get(o, ())):
                add(s, typ, z)
        elif p == dom:
            for a, _, _ in with_predicate(s):
                add(a, typ, o)
        elif p == rng:
            for _, _, b in with_predicate(s):
                add(b, typ, o)
        # rules 2, 5 and 6 with this triple as the instance premise
        for q in list(sp_out.get(p, ())):
            add(s, q, o)
        for c in list(domains.get(p, ())):
            add(s, typ, c)
        for d in list(ranges.get(p, ())):
            add(o, typ, d)
    return derived


def rho_derived(g: Graph) -> Graph:
    """Only the triples the closure adds to ``g``."""
    return g.cached("rho_derived", lambda: Graph.from_ids(_derive(g)))


def rho_closure(g: Graph) -> Graph:
    """Least superset of ``g`` closed under the six rules.

    The result is cached on ``g`` and recomputed after ``g`` changes.
    """

    def build():
        extra = rho_derived(g).id_triples()
        return g if not extra else Graph.from_ids(g.id_triples() | extra)

    return g.cached("rho_closure", build)


def entailed_bgp_match(bgp, g: Graph) -> list:
    """Solutions of a basic graph pattern over the closure of ``g``."""
    from .algebra import EvalContext, eval_pattern
    from .sparql.ast import Bgp

    if not isinstance(bgp, Bgp):
        bgp = Bgp(tuple(bgp))
    return eval_pattern(bgp, EvalContext.for_graph(g, "rhodf"))


__all__ = ["rho_closure", "rho_derived", "entailed_bgp_match", "RHO_VOCABULARY"]
