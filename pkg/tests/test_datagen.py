import itertools

import pytest

from rdfviews.datagen import (
    GRAPH_NAMES,
    SCHEMA,
    SHAPES,
    GenProfile,
    Manifest,
    _count_pairs,
    artists_for_size,
    build_corpus,
    expected_triple_count,
    generate,
)
from rdfviews.ntriples import serialize_ntriples
from rdfviews.terms import FOAF, IRI, MO, RDF_TYPE

from oracles import triples_of


@pytest.mark.parametrize("shape", SHAPES)
@pytest.mark.parametrize("a,r,t", [(0, 2, 3), (1, 1, 1), (7, 2, 3), (13, 3, 5), (30, 1, 0), (5, 0, 4)])
def test_count_formula(shape, a, r, t):
    g, m = generate(GenProfile(shape, a, r, t))
    assert len(g) == m.triples == expected_triple_count(GenProfile(shape, a, r, t))


def test_count_pairs_brute_force():
    for a, b, m in itertools.product(range(8), range(6), (2, 3, 5)):
        for r in range(m):
            brute = sum(1 for i in range(a) for j in range(b) if (i + j) % m == r)
            assert _count_pairs(a, b, m, r) == brute


@pytest.mark.parametrize("shape", SHAPES)
def test_no_artists_means_schema_only(shape):
    g, m = generate(GenProfile(shape, 0))
    assert triples_of(g) == set(SCHEMA)
    assert m.authored == [] and m.colleagues == []


def test_magnatune_uses_maker_only():
    g, m = generate(GenProfile("magnatune", 2, 1))
    made = [t for t in triples_of(g) if t[1] == IRI(FOAF + "made")]
    maker = [t for t in triples_of(g) if t[1] == IRI(FOAF + "maker")]
    assert len(maker) == 2 and made == []
    assert len(m.authored) == 2


def test_jamendo_authorship_is_covered():
    g, m = generate(GenProfile("jamendo", 9))
    ts = triples_of(g)
    for artist, record in m.authored:
        a, r = IRI(artist), IRI(record)
        assert (a, IRI(FOAF + "made"), r) in ts or (r, IRI(FOAF + "maker"), a) in ts


def test_peel_colleagues_share_a_place():
    g, m = generate(GenProfile("peel", 9))
    assert m.colleagues
    assert all((b, a) in m.colleagues for a, b in m.colleagues)
    assert all(a != b for a, b in m.colleagues)


@pytest.mark.parametrize("shape", SHAPES)
def test_deterministic(shape):
    p = GenProfile(shape, 11, seed=4)
    assert serialize_ntriples(generate(p)[0]) == serialize_ntriples(generate(p)[0])


def test_seed_changes_literals():
    a = serialize_ntriples(generate(GenProfile("jamendo", 11, seed=1))[0])
    b = serialize_ntriples(generate(GenProfile("jamendo", 11, seed=2))[0])
    assert a != b


def test_manifest_json_round_trip():
    _, m = generate(GenProfile("peel", 6))
    back = Manifest.from_json(m.to_json())
    assert back == m


@pytest.mark.parametrize("kwargs", [dict(shape="nope", artist_count=1), dict(shape="peel", artist_count=-1),
                                    dict(shape="jamendo", artist_count=1, tracks_per_record=-2)])
def test_profile_validation(kwargs):
    with pytest.raises(ValueError):
        GenProfile(**kwargs)


def test_artists_for_size_is_minimal():
    for shape in SHAPES:
        a = artists_for_size(shape, 5000)
        assert expected_triple_count(GenProfile(shape, a)) >= 5000
        assert expected_triple_count(GenProfile(shape, a - 1)) < 5000


def test_corpus_layout(small_corpus, small_corpus_manifests):
    ds = small_corpus
    assert set(ds.named) == set(GRAPH_NAMES.values())
    union = set().union(*(triples_of(g) for g in ds.named.values()))
    assert triples_of(ds.default_graph) == union
    assert 9_000 <= len(ds.default_graph) <= 11_000
    assert set(small_corpus_manifests) == set(SHAPES)


def test_corpus_types_records(small_corpus):
    g = small_corpus.named[GRAPH_NAMES["magnatune"]]
    assert any(t[1] == RDF_TYPE and t[2] == IRI(MO + "Record") for t in triples_of(g))


def test_corpus_deterministic():
    a, _ = build_corpus(3000, seed=5)
    b, _ = build_corpus(3000, seed=5)
    assert serialize_ntriples(a.default_graph) == serialize_ntriples(b.default_graph)
