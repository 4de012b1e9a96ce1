"""Acceptance criteria 1-7, each at its stated tolerance.

Every test records its outcome in ``conftest.ACCEPTANCE`` so the run ends
with one PASS/FAIL line per criterion.
"""

import random
import time
from statistics import mean

import pytest

import conftest
from rdfviews.algebra import EvalContext, eval_pattern
from rdfviews.bench import (
    GROUPS,
    KINDS,
    TEST2_EXPECTED_RDF,
    TEST2_EXPECTED_RHODF,
    TEST2_TABLE_ERRATA,
    UNION_QUERIES,
    aggregate,
    load_corpus,
    load_test2_queries,
    render_text,
    run_test1,
    run_test2,
    run_test3,
)
from rdfviews.entailment import rho_closure
from rdfviews.graph import Dataset, Graph
from rdfviews.repository import Repository
from rdfviews.resources import read_data
from rdfviews.schema import build_summary, bundled_ontology, extract_rdfs_from_owl, to_dot
from rdfviews.sparql import Group, Optional_, Union_
from rdfviews.terms import DEF, IRI, MO, RDF_TYPE, RDFS_SUBCLASSOF, TERMS, Triple
from rdfviews.views import StratificationError, ViewDef, ViewRegistry

import strategies as S
from oracles import as_multiset, bgp_oracle, construct_oracle, naive_closure, pattern_oracle, triples_of

SC = RDFS_SUBCLASSOF
MM, RECORD, LIVE = IRI(MO + "MusicalManifestation"), IRI(MO + "Record"), IRI(MO + "LiveAlbum")


def record(n, ok, detail):
    conftest.ACCEPTANCE[n] = (ok, detail)
    print(f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}")


def fixture_triples(ds) -> set:
    (g,) = ds.named.values()
    return triples_of(g)


# -- 1 --------------------------------------------------------------------------

def test_criterion_1_entailment_probes(test2_dataset):
    t0 = time.perf_counter()
    rows = run_test2().test2
    elapsed = time.perf_counter() - t0

    # second route: probe templates instantiated over the brute-force closure
    base = fixture_triples(test2_dataset)
    closed = naive_closure(base)
    derived = {}
    for pid, q in load_test2_queries():
        for regime, triples in (("none", base), ("rhodf", closed)):
            derived[regime, pid] = construct_oracle(q.form.template, pattern_oracle(q.pattern, triples))

    failures = []
    for r in rows:
        table = TEST2_EXPECTED_RHODF if r["entailment"] == "rhodf" else TEST2_EXPECTED_RDF
        obtained = set(r["obtained"])
        if obtained != {t.n3() for t in table[r["probe"]]}:
            failures.append(f"{r['entailment']}/{r['probe']} vs table")
        if obtained != {Triple(*t).n3() for t in derived[r["entailment"], r["probe"]]}:
            failures.append(f"{r['entailment']}/{r['probe']} vs oracle")
    plain = [r for r in rows if r["entailment"] == "none"]
    nonempty = sum(bool(r["obtained"]) for r in plain)
    # the erratum row is the only table row the rules leave out
    erratum_ok = all(not (extra & TEST2_EXPECTED_RHODF[pid]) and not ({tuple(t) for t in extra} & derived["rhodf", pid])
                     for pid, extra in TEST2_TABLE_ERRATA.items())
    ok = not failures and len(rows) == 12 and nonempty == 3 and erratum_ok and elapsed < 1.0
    record(1, ok, f"{12 - len({f.split()[0] for f in failures})}/12 probe sets exact, "
                  f"{nonempty} non-empty without entailment, {elapsed:.3f}s")
    assert ok, failures


# -- 2 --------------------------------------------------------------------------

def test_criterion_2_views_equal_construct(small_corpus):
    repo = Repository()
    repo.dataset.default_graph = small_corpus.default_graph
    repo.dataset.named.update(small_corpus.named)
    t0 = time.perf_counter()
    rows = run_test1(load_corpus(), repo).test1
    elapsed = time.perf_counter() - t0
    passed = sum(r["verdict"] == "pass" for r in rows)
    ok = len(rows) == 18 and passed == 18 and elapsed < 60
    record(2, ok, f"{passed}/{len(rows)} queries equal, {elapsed:.1f}s")
    assert ok, [r for r in rows if r["verdict"] != "pass"]


# -- 3 --------------------------------------------------------------------------

def test_criterion_3_closure_oracle():
    assert len(S.CLOSURE_VOCAB) == 10
    rng = random.Random(2024)
    mismatches = 0
    for _ in range(200):
        triples = S.random_closure_graph(rng, 30)
        if triples_of(rho_closure(Graph(triples))) != naive_closure(triples):
            mismatches += 1
    chain_ok = True
    for k in range(1, 9):
        nodes = [IRI(f"http://example.org/c{i}") for i in range(k + 1)]
        closed = rho_closure(Graph([(nodes[i], SC, nodes[i + 1]) for i in range(k)]))
        chain_ok &= sum(1 for t in triples_of(closed) if t[1] == SC) == k * (k + 1) // 2
    ok = mismatches == 0 and chain_ok
    record(3, ok, f"{200 - mismatches}/200 random graphs equal the oracle, chain law "
                  f"{'holds' if chain_ok else 'fails'} for k=1..8")
    assert ok


# -- 4 --------------------------------------------------------------------------

def test_criterion_4_evaluator_oracle():
    rng = random.Random(77)
    bgp_bad = union_bad = optional_bad = 0
    for _ in range(500):
        triples = S.random_data_graph(rng, 50)
        a, b = S.random_bgp(rng, 3), S.random_bgp(rng, 3)
        ctx = EvalContext.for_graph(Graph(triples))
        if as_multiset(eval_pattern(a, ctx)) != as_multiset(bgp_oracle(a.triples, triples)):
            bgp_bad += 1
        if as_multiset(eval_pattern(Union_(a, b), ctx)) != as_multiset(eval_pattern(Union_(b, a), ctx)):
            union_bad += 1
        opt = Group((a, Optional_(b)))
        out = eval_pattern(opt, ctx)
        kept = all(any(all(o.get(k) == v for k, v in m.items()) for o in out) for m in eval_pattern(a, ctx))
        if not kept or as_multiset(out) != as_multiset(pattern_oracle(opt, triples)):
            optional_bad += 1
    ok = bgp_bad == union_bad == optional_bad == 0
    record(4, ok, f"{500 - bgp_bad}/500 BGP instances exact; union commutativity failures {union_bad}, "
                  f"optional preservation failures {optional_bad}")
    assert ok


# -- 5 --------------------------------------------------------------------------

def sc_view_extent(edges):
    g = Graph([(IRI(f"http://example.org/c{a}"), SC, IRI(f"http://example.org/c{b}")) for a, b in edges])
    reg = ViewRegistry(Dataset(g))
    reg.load_trig(read_data("views", "subclass_closure.trig"))
    sc = TERMS.intern(SC)
    expected = {t for t in rho_closure(g).id_triples() if t[1] == sc}
    return reg.resolve(IRI(DEF + "scClosure")).id_triples(), expected


def test_criterion_5_recursive_view():
    cases = [[(i, i + 1) for i in range(k)] for k in range(1, 9)]
    rng = random.Random(5)
    cases += [S.random_dag(rng, 8, 15) for _ in range(40)]
    bad = sum(got != expected for got, expected in map(sc_view_extent, cases))

    ex = "http://example.org/neg/"
    text = (f"CONSTRUCT {{ ?s <{ex}p> ?o }} WHERE {{ ?s <{ex}q> ?o "
            f"OPTIONAL {{ GRAPH <{ex}N> {{ ?s <{ex}p> ?x }} }} FILTER (!BOUND(?x)) }}")
    reg = ViewRegistry()
    try:
        reg.register(ViewDef.from_text(IRI(ex + "N"), text))
        rejected = False
    except StratificationError:
        rejected = len(reg) == 0
    ok = bad == 0 and rejected
    record(5, ok, f"{len(cases) - bad}/{len(cases)} chains and DAGs equal the sc closure; "
                  f"self-negating view {'rejected' if rejected else 'accepted'}")
    assert ok


# -- 6 --------------------------------------------------------------------------

DOT_RUNS = 3


def test_criterion_6_schema_summary(test2_dataset):
    mo = extract_rdfs_from_owl(bundled_ontology())
    summary = build_summary(test2_dataset, mo)
    sets_ok = (summary.C == {RECORD} and (RECORD, MM) in summary.P2 and {MM, LIVE} <= summary.C_prime)
    # hand-derived: the one class typed in the data, and what the ontology says about it
    typed = {o for _, p, o in fixture_triples(test2_dataset) if p == RDF_TYPE}
    typed &= {x for t in triples_of(mo) for x in (t[0], t[2])}
    hand_ok = summary.C == typed
    dots = {to_dot(build_summary(test2_dataset, extract_rdfs_from_owl(bundled_ontology())))
            for _ in range(DOT_RUNS)}
    ok = sets_ok and hand_ok and len(dots) == 1
    record(6, ok, f"C={sorted(c.value.rsplit('/', 1)[-1] for c in summary.C)}, "
                  f"|C'|={len(summary.C_prime)}, |P2|={len(summary.P2)}, "
                  f"DOT {'byte-stable' if len(dots) == 1 else 'unstable'} over {DOT_RUNS} runs")
    assert ok


# -- 7 --------------------------------------------------------------------------

SIZES = (500_000, 1_000_000, 2_000_000)
CELL_TIMEOUT = 300.0


@pytest.mark.slow
def test_criterion_7_scale_and_table_shapes():
    report = run_test3(SIZES, timeout=CELL_TIMEOUT)
    cells = report.test3
    required = [c for c in cells if c["query"] not in UNION_QUERIES]
    late = [c for c in required if c["seconds"] is None or c["seconds"] >= CELL_TIMEOUT]

    shapes_ok = True
    for by, labels in (("group", GROUPS), ("kind", KINDS)):
        agg = aggregate(cells, by)
        shapes_ok &= list(agg) == list(labels)
        for label, per_variant in agg.items():
            for variant, value in per_variant.items():
                members = [c["seconds"] for c in cells if c[by] == label and c["variant"] == variant
                           and c["seconds"] is not None]
                shapes_ok &= value == pytest.approx(mean(members))
    tables = render_text(report).strip().split("\n\n")
    shapes_ok &= len(tables) == 3
    shapes_ok &= sum(line.startswith("NG") for line in tables[0].splitlines()) == 18
    shapes_ok &= len(tables[1].splitlines()) == 5 + len(GROUPS)
    shapes_ok &= len(tables[2].splitlines()) == 5 + len(KINDS)
    shapes_ok &= all(v in tables[0].splitlines()[2] for v in ("MEM_500k", "MEM_1M", "MEM_2M"))

    slowest = max(c["seconds"] for c in required if c["seconds"] is not None)
    ok = len(cells) == 18 * len(SIZES) and not late and shapes_ok
    record(7, ok, f"{len(required) - len(late)}/{len(required)} non-UNION cells under {CELL_TIMEOUT:.0f}s "
                  f"(slowest {slowest:.2f}s), table shapes {'match' if shapes_ok else 'differ'}")
    assert ok, late
