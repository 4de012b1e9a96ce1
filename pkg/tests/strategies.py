"""Random graphs and patterns for property and oracle tests."""

import random

from hypothesis import strategies as st

from rdfviews.sparql import Bgp, TriplePattern, Var
from rdfviews.terms import (
    BNode,
    IRI,
    Literal,
    RDF_TYPE,
    RDFS_DOMAIN,
    RDFS_RANGE,
    RDFS_SUBCLASSOF,
    RDFS_SUBPROPERTYOF,
)

EX = "http://example.org/t/"

# closure vocabulary: the five ρdf predicates plus five other terms
RHO_TERMS = [RDFS_SUBPROPERTYOF, RDFS_SUBCLASSOF, RDF_TYPE, RDFS_DOMAIN, RDFS_RANGE]
CLOSURE_VOCAB = RHO_TERMS + [IRI(EX + "a"), IRI(EX + "b"), IRI(EX + "c"), BNode("n"), Literal("lit")]

# evaluator vocabulary
NODES = [IRI(EX + c) for c in "abcdef"] + [BNode("b0")]
PREDICATES = [IRI(EX + p) for p in ("p", "q", "r")]
LITERALS = [Literal("1"), Literal("x", language="en")]
VARS = [Var("x"), Var("y"), Var("z")]
# blank nodes in a query act as variables, so patterns use IRI constants only
PATTERN_NODES = NODES[:-1]


def random_closure_graph(rng: random.Random, max_triples: int = 30) -> set:
    subjects = [t for t in CLOSURE_VOCAB if not isinstance(t, Literal)]
    preds = [t for t in CLOSURE_VOCAB if isinstance(t, IRI)]
    out = set()
    for _ in range(rng.randint(0, max_triples)):
        # favour schema predicates so rules actually fire
        p = rng.choice(RHO_TERMS) if rng.random() < 0.6 else rng.choice(preds)
        out.add((rng.choice(subjects), p, rng.choice(CLOSURE_VOCAB)))
    return out


def random_data_graph(rng: random.Random, max_triples: int = 50) -> set:
    out = set()
    for _ in range(rng.randint(0, max_triples)):
        o = rng.choice(NODES + LITERALS)
        out.add((rng.choice(NODES), rng.choice(PREDICATES), o))
    return out


def random_pattern(rng: random.Random) -> TriplePattern:
    def pick(pool):
        return rng.choice(VARS) if rng.random() < 0.6 else rng.choice(pool)

    return TriplePattern(pick(PATTERN_NODES), pick(PREDICATES), pick(PATTERN_NODES + LITERALS))


def random_bgp(rng: random.Random, max_patterns: int = 3) -> Bgp:
    return Bgp(tuple(random_pattern(rng) for _ in range(rng.randint(1, max_patterns))))


def random_dag(rng: random.Random, nodes: int = 8, max_edges: int = 15) -> set:
    """Edges (i, j) with i < j, so the result is acyclic."""
    edges = set()
    for _ in range(rng.randint(1, max_edges)):
        i, j = sorted(rng.sample(range(nodes), 2))
        edges.add((i, j))
    return edges


# -- hypothesis --------------------------------------------------------------

iris = st.sampled_from(PATTERN_NODES + PREDICATES)
bnodes = st.builds(BNode, st.from_regex(r"[a-z][a-z0-9]{0,5}", fullmatch=True))
literals = st.one_of(
    st.builds(Literal, st.text(max_size=12)),
    st.builds(lambda s: Literal(s, language="en"), st.text(max_size=6)),
    st.builds(lambda n: Literal(str(n), "http://www.w3.org/2001/XMLSchema#integer"),
              st.integers(-1000, 1000)),
)
terms = st.one_of(iris, bnodes, literals)
ground_terms = st.one_of(iris, literals)

triples = st.tuples(st.one_of(iris, bnodes), iris, terms)
ground_triples = st.tuples(iris, iris, ground_terms)
ground_graphs = st.sets(ground_triples, max_size=40)
graphs = st.sets(triples, max_size=40)

data_graphs = st.sets(
    st.tuples(st.sampled_from(NODES), st.sampled_from(PREDICATES), st.sampled_from(NODES + LITERALS)),
    max_size=30,
)
patterns = st.builds(
    TriplePattern,
    st.one_of(st.sampled_from(VARS), st.sampled_from(PATTERN_NODES)),
    st.one_of(st.sampled_from(VARS), st.sampled_from(PREDICATES)),
    st.one_of(st.sampled_from(VARS), st.sampled_from(PATTERN_NODES + LITERALS)),
)
bgps = st.lists(patterns, min_size=1, max_size=3).map(lambda ps: Bgp(tuple(ps)))
