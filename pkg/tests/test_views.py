import random

import pytest

from rdfviews.algebra import QueryError, eval_query
from rdfviews.datagen import GRAPH_NAMES, GenProfile, generate
from rdfviews.entailment import rho_closure
from rdfviews.graph import Dataset, Graph
from rdfviews.resources import read_data
from rdfviews.sparql import parse_query
from rdfviews.terms import DEF, IRI, RDFS_SUBCLASSOF, TERMS
from rdfviews.views import (
    DuplicateViewError,
    StratificationError,
    UnknownViewError,
    ViewDef,
    ViewRegistry,
    strongly_connected_components,
)

import strategies as S

SC = RDFS_SUBCLASSOF
EX = "http://example.org/v/"
SC_CLOSURE = IRI(DEF + "scClosure")


def view(name, text):
    return ViewDef.from_text(IRI(name), text)


def select_all(registry, name):
    q = parse_query(f"SELECT * WHERE {{ GRAPH <{name}> {{ ?s ?p ?o }} }}")
    return {tuple(r) for r in eval_query(q, registry.dataset, registry).rows}


def sc_registry(edges):
    nodes = {}
    g = Graph()
    for a, b in edges:
        na = nodes.setdefault(a, IRI(f"{EX}c{a}"))
        nb = nodes.setdefault(b, IRI(f"{EX}c{b}"))
        g.add(na, SC, nb)
    reg = ViewRegistry(Dataset(g))
    reg.load_trig(read_data("views", "subclass_closure.trig"))
    return reg, g


def sc_part(g: Graph) -> set:
    sc = TERMS.intern(SC)
    return {t for t in g.id_triples() if t[1] == sc}


# -- registration -----------------------------------------------------------------

def test_uc1_has_no_dependencies():
    reg = ViewRegistry()
    (name,) = reg.load_trig(read_data("views", "uc1.trig"))
    assert name == IRI(DEF + "query1")
    assert reg.deps(name) == set()


def test_view_over_view_edge():
    reg = ViewRegistry()
    reg.register(view(EX + "B", "CONSTRUCT { ?s ?p ?o } WHERE { ?s ?p ?o }"))
    reg.register(view(EX + "A", f"CONSTRUCT {{ ?s ?p ?o }} FROM <{EX}B> WHERE {{ ?s ?p ?o }}"))
    assert reg.deps(IRI(EX + "A")) == {IRI(EX + "B")}
    assert reg.deps(IRI(EX + "B")) == set()
    assert all(len(c) == 1 for c in reg.components())


def test_self_negating_view_rejected():
    reg = ViewRegistry()
    text = (f"CONSTRUCT {{ ?s <{EX}p> ?o }} WHERE {{ ?s <{EX}q> ?o "
            f"OPTIONAL {{ GRAPH <{EX}N> {{ ?s <{EX}p> ?x }} }} FILTER (!BOUND(?x)) }}")
    with pytest.raises(StratificationError, match="N"):
        reg.register(view(EX + "N", text))
    assert len(reg) == 0


def test_negation_across_cycle_rejected():
    reg = ViewRegistry()
    reg.register(view(EX + "A", f"CONSTRUCT {{ ?s ?p ?o }} WHERE {{ GRAPH <{EX}B> {{ ?s ?p ?o }} }}"))
    text = (f"CONSTRUCT {{ ?s <{EX}p> ?o }} WHERE {{ ?s <{EX}q> ?o "
            f"OPTIONAL {{ GRAPH <{EX}A> {{ ?s <{EX}p> ?x }} }} FILTER (!BOUND(?x)) }}")
    with pytest.raises(StratificationError):
        reg.register(view(EX + "B", text))


def test_negation_over_lower_stratum_allowed():
    reg = ViewRegistry()
    reg.register(view(EX + "Base", "CONSTRUCT { ?s ?p ?o } WHERE { ?s ?p ?o }"))
    text = (f"CONSTRUCT {{ ?s <{EX}p> ?o }} WHERE {{ ?s <{EX}q> ?o "
            f"OPTIONAL {{ GRAPH <{EX}Base> {{ ?s <{EX}p> ?x }} }} FILTER (!BOUND(?x)) }}")
    reg.register(view(EX + "Neg", text))
    assert IRI(EX + "Base") in reg.deps(IRI(EX + "Neg"))


def test_duplicate_and_unknown():
    reg = ViewRegistry()
    reg.register(view(EX + "A", "CONSTRUCT { ?s ?p ?o } WHERE { ?s ?p ?o }"))
    with pytest.raises(DuplicateViewError):
        reg.register(view(EX + "A", "CONSTRUCT { ?s ?p ?o } WHERE { ?s ?p ?o }"))
    with pytest.raises(UnknownViewError):
        reg.resolve(IRI(EX + "missing"))


def test_name_of_loaded_graph_rejected():
    reg = ViewRegistry(Dataset(Graph(), {IRI(EX + "g"): Graph()}))
    with pytest.raises(DuplicateViewError):
        reg.register(view(EX + "g", "CONSTRUCT { ?s ?p ?o } WHERE { ?s ?p ?o }"))


def test_view_must_be_construct():
    with pytest.raises(Exception):
        view(EX + "A", "SELECT * WHERE { ?s ?p ?o }")


def test_tarjan_orders_dependencies_first():
    edges = {"a": ["b"], "b": ["c"], "c": ["b"], "d": []}
    comps = strongly_connected_components(["a", "b", "c", "d"], edges)
    flat = [sorted(c) for c in comps]
    assert ["b", "c"] in flat
    assert flat.index(["b", "c"]) < flat.index(["a"])


# -- resolution --------------------------------------------------------------------

def test_empty_base_gives_empty_extent():
    reg = ViewRegistry()
    reg.load_trig(read_data("views", "uc1.trig"))
    assert len(reg.resolve(IRI(DEF + "query1"))) == 0


def test_uc1_view_recovers_authored_pairs():
    ds = Dataset()
    manifests = {}
    for shape, n in (("jamendo", 15), ("magnatune", 7)):
        g, m = generate(GenProfile(shape, n))
        ds.named[GRAPH_NAMES[shape]] = g
        manifests[shape] = m
    reg = ViewRegistry(ds)
    reg.load_trig(read_data("views", "uc1.trig"))
    extent = reg.resolve(IRI(DEF + "query1"))
    got = {(t.subject.value, t.object.value) for t in extent}
    assert got == set(manifests["jamendo"].authored) | set(manifests["magnatune"].authored)


def test_colleagues_view_matches_manifest():
    g, m = generate(GenProfile("peel", 9))
    reg = ViewRegistry(Dataset(Graph(), {GRAPH_NAMES["peel"]: g}))
    reg.load_trig(read_data("views", "colleagues.trig"))
    extent = reg.resolve(IRI(DEF + "coleaguesView"))
    assert {(t.subject.value, t.object.value) for t in extent} == set(m.colleagues)


def test_sc_closure_over_four_edge_chain():
    reg, _ = sc_registry([(0, 1), (1, 2), (2, 3), (3, 4)])
    assert len(reg.resolve(SC_CLOSURE)) == 10


@pytest.mark.parametrize("k", range(1, 9))
def test_sc_closure_chain_equals_entailment(k):
    reg, g = sc_registry([(i, i + 1) for i in range(k)])
    extent = reg.resolve(SC_CLOSURE)
    assert extent.id_triples() == sc_part(rho_closure(g))
    assert len(extent) == k * (k + 1) // 2


def test_sc_closure_random_dags():
    rng = random.Random(5)
    for _ in range(30):
        reg, g = sc_registry(S.random_dag(rng))
        assert reg.resolve(SC_CLOSURE).id_triples() == sc_part(rho_closure(g))


def test_mutual_recursion_fixpoint():
    reg = ViewRegistry(Dataset(Graph([(IRI(EX + "a"), IRI(EX + "next"), IRI(EX + "b")),
                                      (IRI(EX + "b"), IRI(EX + "next"), IRI(EX + "c"))])))
    reg.register(view(EX + "Odd", f"CONSTRUCT {{ ?x <{EX}reach> ?z }} WHERE {{ "
                                  f"{{ ?x <{EX}next> ?z }} UNION {{ ?x <{EX}next> ?y . GRAPH <{EX}Even> {{ ?y <{EX}reach> ?z }} }} }}"))
    reg.register(view(EX + "Even", f"CONSTRUCT {{ ?x <{EX}reach> ?z }} WHERE {{ "
                                   f"?x <{EX}next> ?y . GRAPH <{EX}Odd> {{ ?y <{EX}reach> ?z }} }}"))
    assert len(reg.components()) == 1
    odd = {(t.subject.value[-1], t.object.value[-1]) for t in reg.resolve(IRI(EX + "Odd"))}
    even = {(t.subject.value[-1], t.object.value[-1]) for t in reg.resolve(IRI(EX + "Even"))}
    # paths of odd and of even length
    assert odd == {("a", "b"), ("b", "c")}
    assert even == {("a", "c")}


def test_view_resolvable_from_three_positions():
    g = Graph([(IRI(EX + "a"), IRI(EX + "p"), IRI(EX + "b"))])
    reg = ViewRegistry(Dataset(g))
    reg.register(view(EX + "V", f"CONSTRUCT {{ ?o <{EX}inv> ?s }} WHERE {{ ?s <{EX}p> ?o }}"))
    queries = [
        f"SELECT * FROM <{EX}V> WHERE {{ ?s ?p ?o }}",
        f"SELECT * FROM NAMED <{EX}V> WHERE {{ GRAPH <{EX}V> {{ ?s ?p ?o }} }}",
        f"SELECT * WHERE {{ GRAPH <{EX}V> {{ ?s ?p ?o }} }}",
    ]
    results = [eval_query(parse_query(q), reg.dataset, reg).rows for q in queries]
    assert results[0] == results[1] == results[2] == [(IRI(EX + "b"), IRI(EX + "inv"), IRI(EX + "a"))]


# -- materialization ----------------------------------------------------------------

def materialized_registry():
    g, _ = generate(GenProfile("magnatune", 5))
    reg = ViewRegistry(Dataset(Graph(), {GRAPH_NAMES["magnatune"]: g}))
    reg.load_trig(read_data("views", "uc1.trig"))
    return reg, g


def test_materialization_transparent():
    reg, _ = materialized_registry()
    name = IRI(DEF + "query1")
    virtual = select_all(reg, name.value)
    reg.materialize(name)
    assert reg.is_fresh(name)
    assert select_all(reg, name.value) == virtual


def test_materialize_twice_is_noop():
    reg, _ = materialized_registry()
    name = IRI(DEF + "query1")
    first = reg.materialize(name)
    assert reg.materialize(name) is first


def test_base_mutation_marks_stale():
    reg, g = materialized_registry()
    name = IRI(DEF + "query1")
    stored = reg.materialize(name)
    rec, art = IRI("http://dbtune.org/magnatune/record/new"), IRI("http://dbtune.org/magnatune/artist/0")
    from rdfviews.terms import FOAF, MO, RDF_TYPE

    g.add(rec, RDF_TYPE, IRI(MO + "Record"))
    g.add(rec, IRI(FOAF + "maker"), art)
    assert not reg.is_fresh(name)
    recomputed = reg.resolve(name)
    assert len(recomputed) == len(stored) + 1
    assert reg.stored_extent(name) is stored


def test_upstream_redefinition_marks_downstream_stale():
    reg = ViewRegistry(Dataset(Graph([(IRI(EX + "a"), IRI(EX + "p"), IRI(EX + "b"))])))
    reg.register(view(EX + "B", "CONSTRUCT { ?s ?p ?o } WHERE { ?s ?p ?o }"))
    reg.register(view(EX + "A", f"CONSTRUCT {{ ?s ?p ?o }} FROM <{EX}B> WHERE {{ ?s ?p ?o }}"))
    reg.materialize(IRI(EX + "A"))
    reg.drop(IRI(EX + "B"))
    reg.register(view(EX + "B", "CONSTRUCT { ?o ?p ?s } WHERE { ?s ?p ?o }"))
    assert not reg.is_fresh(IRI(EX + "A"))
    (t,) = list(reg.resolve(IRI(EX + "A")))
    assert t.subject == IRI(EX + "b")


def test_invalidate_all():
    reg, _ = materialized_registry()
    name = IRI(DEF + "query1")
    reg.materialize(name)
    reg.invalidate_all()
    assert not reg.is_fresh(name)


# -- persistence ------------------------------------------------------------------

def test_dump_reload_reproduces_registry():
    reg = ViewRegistry()
    for doc in ("uc1.trig", "colleagues.trig", "subclass_closure.trig"):
        reg.load_trig(read_data("views", doc))
    reg.register(view(EX + "plain", f"PREFIX ex: <{EX}> CONSTRUCT {{ ?s ex:p ?o }} WHERE {{ ?s ex:q ?o }}"))
    again = ViewRegistry()
    again.load_trig(reg.dump_trig())
    assert [v.name for v in again.definitions()] == [v.name for v in reg.definitions()]
    for a, b in zip(reg.definitions(), again.definitions()):
        assert a.query == b.query
    assert again.dump_trig() == reg.dump_trig()


def test_fixpoint_rounds_recorded():
    reg, _ = sc_registry([(0, 1), (1, 2), (2, 3)])
    reg.resolve(SC_CLOSURE)
    assert reg.fixpoint_rounds[SC_CLOSURE] >= 2


def test_self_reference_outside_registry_errors():
    reg = ViewRegistry()
    with pytest.raises(QueryError):
        eval_query(parse_query("SELECT * FROM <http://nowhere/view> WHERE { ?s ?p ?o }"), reg.dataset, reg)
