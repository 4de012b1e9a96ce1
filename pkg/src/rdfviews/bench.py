"""Benchmark harness for the three experimental tests.

* Test 1: every corpus query Q_i is registered as view NG_i.  Q_i is run
  directly, then ``SELECT * FROM NG_i WHERE {?s ?p ?o}`` is run, and the two
  triple sets are compared up to blank-node renaming.
* Test 2: six entailment probes are registered as views over the inference
  fixture and compared with the expected tables, with and without ρdf.
* Test 3: the SELECT-star-over-view run is timed for every view on
  synthetic datasets of several sizes.  Times are aggregated by query group
  and by graph-pattern kind.
"""

from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field
from statistics import mean
from typing import Optional

from .algebra import QueryError, QueryTimeout, eval_query
from .datagen import build_corpus
from .graph import Graph, isomorphic
from .repository import RepoConfig, Repository
from .resources import list_data, read_data
from .sparql.ast import Query
from .sparql.parser import parse_query
from .terms import DEF, MO, RDF_TYPE, RDFS_SUBCLASSOF, RDFS_SUBPROPERTYOF, EVENT, IRI, Triple

DEFAULT_TIMEOUT = 300.0

GROUPS = {
    "A": ("q1", "q2", "q3", "q4", "q5"),
    "B": ("q6", "q7", "q8", "q9", "q10"),
    "C": ("q11", "q12", "q13", "q14"),
    "D": ("q15", "q16", "q17", "q18"),
}
KINDS = {
    "BGP": ("q1", "q6", "q11", "q15"),
    "Group GP": ("q2", "q7", "q12", "q16"),
    "Optional GP": ("q3", "q8", "q13", "q17"),
    "Union GP": ("q4", "q9", "q14", "q18"),
    "Graph FROM NAMED": ("q5", "q10"),
}
GROUP_OF = {q: g for g, qs in GROUPS.items() for q in qs}
KIND_OF = {q: k for k, qs in KINDS.items() for q in qs}
UNION_QUERIES = KINDS["Union GP"]

DAT = "http://example.org/dat/"
TEST2_GRAPH = IRI(DAT + "inferenceTest")


def _t(s, p, o):
    return Triple(IRI(s), IRI(p), IRI(o))


_SP, _SC, _TYPE = RDFS_SUBPROPERTYOF.value, RDFS_SUBCLASSOF.value, RDF_TYPE.value
_MM = MO + "MusicalManifestation"

# expected results of the six probes, without entailment
TEST2_EXPECTED_RDF = {
    "i1": {_t(MO + "performer", _SP, EVENT + "agent")},
    "i2": set(),
    "i3": {_t(MO + "Record", _SC, _MM)},
    "i4": {_t(DAT + "TheManComesAround", _TYPE, MO + "Record")},
    "i5": set(),
    "i6": set(),
}
# expected results under ρdf, as derived by the six rules
TEST2_EXPECTED_RHODF = {
    "i1": {_t(MO + "performer", _SP, EVENT + "agent"), _t(MO + "singer", _SP, EVENT + "agent")},
    "i2": {_t(DAT + "JohnnyCash", MO + "performer", DAT + "PersonalJesus")},
    "i3": {_t(MO + "Record", _SC, _MM), _t(MO + "LiveAlbum", _SC, _MM)},
    "i4": {_t(DAT + "TheManComesAround", _TYPE, MO + "Record"), _t(DAT + "TheManComesAround", _TYPE, _MM)},
    "i5": {_t(DAT + "IWalkTheLine", _TYPE, _MM)},
    "i6": {_t(DAT + "AmericanRecordings", _TYPE, MO + "Record"), _t(DAT + "AmericanRecordings", _TYPE, _MM)},
}
# expected-table rows that the six rules do not derive
TEST2_TABLE_ERRATA = {"i5": {_t(DAT + "IWalkTheLine", _TYPE, MO + "Record")}}


# ---------------------------------------------------------------------------
# corpus

def load_corpus() -> list:
    """``[(query id, Query)]`` for the bundled q1..q18, in numeric order."""
    out = []
    for name in list_data("corpus", ".rq"):
        qid = "q" + str(int(name[1:-3]))
        out.append((qid, parse_query(read_data("corpus", name))))
    return out


def load_test2_queries() -> list:
    out = []
    for name in list_data("test2", ".rq"):
        out.append((name.split("_")[0], parse_query(read_data("test2", name))))
    return out


def view_name(qid: str) -> IRI:
    return IRI(f"{DEF}NG{qid[1:]}")


def select_star_over(name: IRI) -> Query:
    return parse_query(f"SELECT * FROM {name.n3()} WHERE {{ ?s ?p ?o }}")


def rows_to_graph(result) -> Graph:
    g = Graph()
    for s, p, o in result.rows:
        g.add(s, p, o)
    return g


def triple_diff(a: Graph, b: Graph) -> int:
    """Size of the symmetric difference; 0 when isomorphic."""
    if isomorphic(a, b):
        return 0
    return len(a.id_triples() ^ b.id_triples())


# ---------------------------------------------------------------------------
# report

@dataclass
class BenchReport:
    test1: list = field(default_factory=list)
    test2: list = field(default_factory=list)
    test3: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=1, sort_keys=True, default=str)

    @classmethod
    def from_json(cls, text: str) -> "BenchReport":
        return cls(**json.loads(text))

    def merge(self, other: "BenchReport") -> "BenchReport":
        return BenchReport(self.test1 + other.test1, self.test2 + other.test2,
                           self.test3 + other.test3, {**self.meta, **other.meta})


# ---------------------------------------------------------------------------
# Test 1

def run_test1(corpus: list, repo: Repository, timeout: Optional[float] = DEFAULT_TIMEOUT) -> BenchReport:
    report = BenchReport()
    for qid, q in corpus:
        row = {"query": qid, "group": GROUP_OF.get(qid), "kind": KIND_OF.get(qid),
               "verdict": "fail", "diff": None, "direct": None, "via_view": None, "error": None}
        name = view_name(qid)
        try:
            if name in repo.registry:
                repo.drop_view(name)
            repo.registry.register_query(name, q)
            t0 = time.perf_counter()
            direct = eval_query(q, repo.dataset, repo.registry,
                                entailment=repo.config.entailment, timeout=timeout)
            t1 = time.perf_counter()
            via = rows_to_graph(eval_query(select_star_over(name), repo.dataset, repo.registry,
                                           entailment=repo.config.entailment, timeout=timeout))
            t2 = time.perf_counter()
            diff = triple_diff(direct, via)
            row.update(verdict="pass" if diff == 0 else "fail", diff=diff, direct=len(direct),
                       via_view=len(via), seconds=[t1 - t0, t2 - t1])
        except QueryTimeout:
            row["error"] = "timeout"
        except (QueryError, ValueError) as e:
            row["error"] = str(e)
        report.test1.append(row)
    return report


# ---------------------------------------------------------------------------
# Test 2

def test2_repository(entailment: str) -> Repository:
    repo = Repository(RepoConfig("memory", entailment))
    repo.load(read_data("test2", "dataset.trig"), "trig", also_default=True)
    return repo


def run_test2(entailments=("none", "rhodf")) -> BenchReport:
    report = BenchReport()
    probes = load_test2_queries()
    for regime in entailments:
        repo = test2_repository(regime)
        expected_table = TEST2_EXPECTED_RHODF if regime == "rhodf" else TEST2_EXPECTED_RDF
        for pid, q in probes:
            name = IRI(f"{DEF}test2/{pid}")
            repo.registry.register_query(name, q)
            got = rows_to_graph(repo.query(f"SELECT * FROM {name.n3()} WHERE {{ ?s ?p ?o }}"))
            obtained = set(got)
            expected = expected_table[pid]
            row = {
                "probe": pid,
                "entailment": regime,
                "expected": sorted(t.n3() for t in expected),
                "obtained": sorted(t.n3() for t in obtained),
                "verdict": "pass" if obtained == expected else "fail",
            }
            if regime == "rhodf" and pid in TEST2_TABLE_ERRATA:
                row["table_rows_not_derived"] = sorted(t.n3() for t in TEST2_TABLE_ERRATA[pid])
            report.test2.append(row)
    return report


# ---------------------------------------------------------------------------
# Test 3

def variant_label(size: int, entailment: str) -> str:
    tag = "MEMR" if entailment == "rhodf" else "MEM"
    if size >= 1_000_000 and size % 1_000_000 == 0:
        scale = f"{size // 1_000_000}M"
    elif size >= 1_000_000:
        scale = f"{size / 1_000_000:g}M"
    else:
        scale = f"{size // 1000}k"
    return f"{tag}_{scale}"


def run_test3(sizes, corpus: Optional[list] = None, flags=("none",), timeout: float = DEFAULT_TIMEOUT,
              skip=(), seed: int = 0, progress=None) -> BenchReport:
    """Time SELECT-star-over-view for each (size, entailment) repository.

    Cells exceeding ``timeout`` are recorded with ``seconds = None`` (N/A).
    Queries listed in ``skip`` are not run.
    """
    corpus = load_corpus() if corpus is None else corpus
    report = BenchReport(meta={"timeout": timeout, "seed": seed})
    for size in sizes:
        ds, _ = build_corpus(size, seed)
        triples = len(ds.default_graph)
        for regime in flags:
            repo = Repository(RepoConfig("memory", regime))
            repo.dataset.default_graph = ds.default_graph
            repo.dataset.named.update(ds.named)
            for qid, q in corpus:
                repo.registry.register_query(view_name(qid), q)
            label = variant_label(size, regime)
            for qid, q in corpus:
                if qid in skip:
                    continue
                repo.registry.invalidate_all()
                t0 = time.perf_counter()
                try:
                    res = eval_query(select_star_over(view_name(qid)), repo.dataset, repo.registry,
                                     entailment=regime, timeout=timeout)
                    seconds, rows, error = time.perf_counter() - t0, len(res), None
                except QueryTimeout:
                    seconds, rows, error = None, None, "timeout"
                cell = {"query": qid, "group": GROUP_OF.get(qid), "kind": KIND_OF.get(qid),
                        "size": size, "triples": triples, "entailment": regime, "variant": label,
                        "seconds": seconds, "rows": rows, "error": error}
                report.test3.append(cell)
                if progress:
                    progress(cell)
    return report


def _variants(cells: list) -> list:
    seen = {}
    for c in cells:
        seen.setdefault(c["variant"], (c["entailment"] == "rhodf", c["size"]))
    return sorted(seen, key=lambda v: seen[v])


def aggregate(cells: list, by: str) -> dict:
    """``{row label: {variant: mean seconds or None}}`` for ``by`` in {"group", "kind"}.

    The mean is taken over the member cells that completed; a row whose
    members all timed out is None, and a row with no measured member is
    absent from the inner dict.
    """
    labels = GROUPS if by == "group" else KINDS
    out = {label: {} for label in labels}
    for variant in _variants(cells):
        for label in labels:
            members = [c for c in cells if c["variant"] == variant and c[by] == label]
            if not members:
                continue
            done = [c["seconds"] for c in members if c["seconds"] is not None]
            out[label][variant] = mean(done) if done else None
    return out


def _fmt(v, digits=2) -> str:
    if v is None:
        return "N/A"
    return f"{v:.{digits}f}"


def _table(title: str, header: list, rows: list) -> str:
    widths = [max(len(str(r[i])) for r in [header] + rows) for i in range(len(header))]
    line = lambda r: "  ".join(  # noqa: E731
        str(c).ljust(w) if i == 0 else str(c).rjust(w) for i, (c, w) in enumerate(zip(r, widths)))
    rule = "-" * len(line(header))
    return "\n".join([title, rule, line(header), rule] + [line(r) for r in rows] + [rule])


def render_text(report: BenchReport) -> str:
    parts = []
    if report.test1:
        rows = [[r["query"], r["group"] or "", r["kind"] or "", r["verdict"],
                 "" if r["diff"] is None else r["diff"], r.get("error") or ""] for r in report.test1]
        passed = sum(r["verdict"] == "pass" for r in report.test1)
        parts.append(_table(f"Test 1: view vs direct CONSTRUCT ({passed}/{len(report.test1)} pass)",
                            ["query", "group", "kind", "verdict", "diff", "error"], rows))
    if report.test2:
        rows = [[r["probe"], r["entailment"], len(r["expected"]), len(r["obtained"]), r["verdict"]]
                for r in report.test2]
        parts.append(_table("Test 2: entailment probes", ["probe", "entailment", "expected", "obtained",
                                                          "verdict"], rows))
    if report.test3:
        variants = _variants(report.test3)
        queries = list(dict.fromkeys(c["query"] for c in report.test3))
        cell = {(c["query"], c["variant"]): c["seconds"] for c in report.test3}
        rows = [[f"NG{q[1:]}"] + [_fmt(cell.get((q, v)), 3) if (q, v) in cell else "-" for v in variants]
                for q in queries]
        parts.append(_table("Test 3: execution time (s) per view", ["query"] + variants, rows))
        for by, title in (("group", "Test 3: average time (s) per query group"),
                          ("kind", "Test 3: average time (s) per pattern kind")):
            agg = aggregate(report.test3, by)
            label = (lambda g: f"group {g}") if by == "group" else (lambda k: k)
            rows = [[label(k)] + [_fmt(agg[k][v], 3) if v in agg[k] else "-" for v in variants] for k in agg]
            parts.append(_table(title, [""] + variants, rows))
    return "\n\n".join(parts) + "\n"


__all__ = [
    "BenchReport",
    "DEFAULT_TIMEOUT",
    "GROUPS",
    "KINDS",
    "UNION_QUERIES",
    "TEST2_EXPECTED_RDF",
    "TEST2_EXPECTED_RHODF",
    "TEST2_TABLE_ERRATA",
    "aggregate",
    "load_corpus",
    "load_test2_queries",
    "render_text",
    "run_test1",
    "run_test2",
    "run_test3",
    "select_star_over",
    "test2_repository",
    "variant_label",
    "view_name",
]
