import os
import subprocess
import sys

import pytest

from rdfviews.algebra import eval_query
from rdfviews.datagen import GRAPH_NAMES, GenProfile, generate
from rdfviews.graph import Dataset, Graph
from rdfviews.schema import (
    DARK_GREY,
    LIGHT_GREY,
    SchemaSummary,
    build_summary,
    bundled_ontology,
    extract_rdfs_from_owl,
    owl2rdfs_queries,
    summary_by_queries,
    to_dot,
)
from rdfviews.terms import FOAF, IRI, MO, OWL, RDF, RDF_TYPE, RDFS

from oracles import triples_of

MM = IRI(MO + "MusicalManifestation")
RECORD = IRI(MO + "Record")
LIVE = IRI(MO + "LiveAlbum")
PROPERTY_KINDS = ("DatatypeProperty", "ObjectProperty", "InverseFunctionalProperty",
                  "TransitiveProperty", "SymmetricProperty")


def owl_oracle(ont: Graph) -> set:
    """RDFS statements read off an OWL graph by direct inspection."""
    out = set()
    for s, p, o in triples_of(ont):
        if p == RDF_TYPE and o == IRI(OWL + "Class"):
            out.add((s, RDF_TYPE, IRI(RDFS + "Class")))
        if p == RDF_TYPE and o in {IRI(OWL + k) for k in PROPERTY_KINDS}:
            out.add((s, RDF_TYPE, IRI(RDF + "Property")))
        if p in {IRI(RDFS + x) for x in ("subClassOf", "subPropertyOf", "domain", "range")}:
            out.add((s, p, o))
    return out


@pytest.fixture(scope="module")
def mo():
    return extract_rdfs_from_owl(bundled_ontology())


def test_ten_extraction_queries():
    assert len(owl2rdfs_queries()) == 10


def test_one_object_property():
    p = IRI("http://example.org/p")
    out = extract_rdfs_from_owl(Graph([(p, RDF_TYPE, IRI(OWL + "ObjectProperty"))]))
    assert triples_of(out) == {(p, RDF_TYPE, IRI(RDF + "Property"))}


def test_empty_ontology():
    assert len(extract_rdfs_from_owl(Graph())) == 0


def test_extraction_matches_per_query_union_and_oracle():
    ont = bundled_ontology()
    per_query = set()
    for _, q in owl2rdfs_queries():
        per_query |= triples_of(eval_query(q, Dataset(ont)))
    out = triples_of(extract_rdfs_from_owl(ont))
    assert out == per_query == owl_oracle(ont)


def test_extraction_does_not_infer():
    a, b, c = (IRI(f"http://example.org/{x}") for x in "abc")
    sc = IRI(RDFS + "subClassOf")
    out = triples_of(extract_rdfs_from_owl(Graph([(a, sc, b), (b, sc, c)])))
    assert (a, sc, c) not in out


def test_test2_summary(test2_dataset, mo):
    s = build_summary(test2_dataset, mo)
    assert s.C == {RECORD}
    assert {MM, LIVE} <= s.C_prime
    assert (RECORD, MM) in s.P2
    assert s.C_prime == {MM, LIVE}
    assert s.P2 == {(LIVE, RECORD), (RECORD, MM)}
    assert s.P1 == set()
    assert s.P3 == {(RDF_TYPE, RECORD)}


def test_empty_dataset(mo):
    s = build_summary(Dataset(), mo)
    assert not (s.C or s.C_prime or s.P1 or s.P2 or s.P3)


def test_jamendo_predicates(mo):
    g, _ = generate(GenProfile("jamendo", 12))
    s = build_summary(Dataset(Graph(), {GRAPH_NAMES["jamendo"]: g}), mo)
    artist = IRI(MO + "MusicArtist")
    assert (artist, IRI(FOAF + "made"), RECORD) in s.P1
    assert (RECORD, IRI(FOAF + "maker"), artist) in s.P1
    # based_near points at untyped places
    assert (IRI(FOAF + "based_near"), artist) in s.P3


@pytest.mark.parametrize("shape", ["jamendo", "magnatune", "peel"])
def test_summary_invariants(shape, mo):
    g, _ = generate(GenProfile(shape, 10))
    s = build_summary(Dataset(Graph(), {GRAPH_NAMES[shape]: g}), mo)
    assert not (s.C & s.C_prime)
    assert all(c1 in s.C and c2 in s.C for c1, _, c2 in s.P1)
    assert all(c in s.C or c1 in s.C for c, c1 in s.P2)


@pytest.mark.parametrize("shape", ["jamendo", "magnatune", "peel"])
def test_queries_agree_with_direct_code(shape, mo):
    g, _ = generate(GenProfile(shape, 10))
    ds = Dataset(Graph(), {GRAPH_NAMES[shape]: g})
    assert summary_by_queries(ds, mo) == build_summary(ds, mo)


def test_queries_agree_on_test2(test2_dataset, mo):
    assert summary_by_queries(test2_dataset, mo) == build_summary(test2_dataset, mo)


# -- DOT --------------------------------------------------------------------------

def test_empty_dot():
    assert to_dot(SchemaSummary()) == "digraph schema {\n}\n"


def test_test2_dot(test2_dataset, mo):
    dot = to_dot(build_summary(test2_dataset, mo))
    lines = dot.splitlines()
    assert sum(LIGHT_GREY in line for line in lines) == 1
    assert sum(DARK_GREY in line for line in lines) == 2
    dashed = [line for line in lines if "style=dashed" in line]
    assert any(MO + "Record" in line and MO + "MusicalManifestation" in line for line in dashed)
    assert "<i>rdf:type</i>" in dot


def test_dot_labels_and_styles(mo):
    g, _ = generate(GenProfile("jamendo", 6))
    dot = to_dot(build_summary(Dataset(Graph(), {GRAPH_NAMES["jamendo"]: g}), mo))
    assert '[label="foaf:made"]' in dot
    assert dot.startswith("digraph schema {\n") and dot.endswith("}\n")


def test_dot_stable_in_process(test2_dataset, mo):
    assert to_dot(build_summary(test2_dataset, mo)) == to_dot(build_summary(test2_dataset, mo))


DOT_SCRIPT = """
from rdfviews.datagen import build_corpus
from rdfviews.schema import build_summary, bundled_ontology, extract_rdfs_from_owl, to_dot
ds, _ = build_corpus(3000, seed=1)
print(to_dot(build_summary(ds, extract_rdfs_from_owl(bundled_ontology()))), end="")
"""


def test_dot_stable_across_processes():
    outs = []
    for seed in ("1", "2", "3"):
        env = dict(os.environ, PYTHONHASHSEED=seed)
        outs.append(subprocess.run([sys.executable, "-c", DOT_SCRIPT], env=env, capture_output=True,
                                   check=True).stdout)
    assert outs[0] == outs[1] == outs[2]
    assert outs[0].count(b"->") > 3
