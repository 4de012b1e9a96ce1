"""Command-line entry point.

Exit status: 0 on success, 1 on user error (bad arguments, unparsable input,
unknown names, timeouts), 2 on internal error.  Results go to standard
output, diagnostics to standard error.

Environment:
  RDFVIEWS_TIMEOUT   default per-query timeout in seconds
  RDFVIEWS_PREFIXES  extra prefixes, ``name=namespace`` separated by commas
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import traceback
from dataclasses import asdict
from pathlib import Path

from . import bench as bench_mod
from .algebra import QueryError, SelectResult
from .datagen import SHAPES, GenProfile, build_corpus, generate
from .graph import Dataset, Graph
from .lexer import ParseError
from .ntriples import parse_ntriples, serialize_ntriples
from .repository import Repository, RepositoryError
from .schema import build_summary, bundled_ontology, extract_rdfs_from_owl, to_dot
from .sparql.parser import engine_prefixes
from .terms import IRI, TermError, shorten
from .trig import parse_trig, serialize_trig
from .views import ViewError

USER_ERRORS = (ParseError, QueryError, RepositoryError, ViewError, TermError, OSError, ValueError)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _env_timeout():
    raw = os.environ.get("RDFVIEWS_TIMEOUT")
    if not raw:
        return None
    try:
        return float(raw)
    except ValueError:
        raise UsageError(f"RDFVIEWS_TIMEOUT must be a number of seconds, got {raw!r}") from None


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _format_of(path: str, given=None) -> str:
    if given:
        return given
    return "trig" if path.endswith(".trig") else "nt"


def _name(text: str) -> IRI:
    """IRI from ``<iri>``, a prefixed name or a bare absolute IRI."""
    text = text.strip()
    if text.startswith("<") and text.endswith(">"):
        return IRI(text[1:-1])
    prefix, sep, local = text.partition(":")
    table = engine_prefixes()
    if sep and prefix in table and not local.startswith("//"):
        return IRI(table[prefix] + local)
    if sep:
        return IRI(text)
    raise UsageError(f"not an IRI or known prefixed name: {text!r}")


def _read_dataset(paths) -> Dataset:
    ds = Dataset()
    for path in paths:
        text = _read(path)
        if _format_of(path) == "trig":
            part, _ = parse_trig(text)
            ds.default_graph = ds.default_graph.union(part.default_graph)
            for name, g in part.named.items():
                ds.add_named(name, g)
        else:
            ds.default_graph = ds.default_graph.union(parse_ntriples(text))
    return ds


def _write(text: str, out) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


# ---------------------------------------------------------------------------
# commands


def cmd_repo_create(args):
    Repository.create(args.path, args.entailment, exist_ok=args.force)
    print(f"created {args.path} (entailment={args.entailment})")


def cmd_load(args):
    repo = Repository.open(args.repo)
    graph = _name(args.graph) if args.graph else None
    total = 0
    for path in args.files:
        total += repo.load(_read(path), _format_of(path, args.format), graph, args.also_default)
    print(f"loaded {total} triples", file=sys.stderr)


def cmd_query(args):
    repo = Repository.open(args.repo)
    if args.query is not None:
        text = args.query
    elif args.file is not None:
        text = _read(args.file)
    else:
        raise UsageError("give the query with --file, --query or --file -")
    timeout = args.timeout if args.timeout is not None else _env_timeout()
    result = repo.query(text, timeout=timeout)
    if isinstance(result, SelectResult):
        sys.stdout.write(result.to_tsv())
    elif isinstance(result, bool):
        print("true" if result else "false")
    else:
        sys.stdout.write(serialize_ntriples(result))


def cmd_view_define(args):
    repo = Repository.open(args.repo)
    if args.trig:
        names = repo.load_views(_read(args.trig))
        for n in names:
            print(f"defined {n.n3()}")
        return
    if not args.name or not args.file:
        raise UsageError("view define needs NAME and FILE (or --trig FILE)")
    view = repo.define_view(_name(args.name), _read(args.file))
    print(f"defined {view.name.n3()}")


def cmd_view_drop(args):
    repo = Repository.open(args.repo)
    name = _name(args.name)
    repo.drop_view(name)
    print(f"dropped {name.n3()}")


def cmd_view_list(args):
    repo = Repository.open(args.repo)
    reg = repo.registry
    for view in repo.views():
        if reg.is_materialized(view.name):
            state = "materialized" if reg.is_fresh(view.name) else "stale"
        else:
            state = "virtual"
        deps = " ".join(sorted(shorten(d) for d in reg.deps(view.name)))
        print(f"{shorten(view.name)}\t{state}\t{deps}")


def cmd_view_materialize(args):
    repo = Repository.open(args.repo)
    timeout = args.timeout if args.timeout is not None else _env_timeout()
    g = repo.materialize(_name(args.name), timeout)
    if args.out:
        _write(serialize_ntriples(g), args.out)
    print(f"materialized {args.name}: {len(g)} triples", file=sys.stderr)


def cmd_schema_summarize(args):
    ds = _read_dataset(args.data)
    if args.ontology:
        ont = _read_dataset([args.ontology])
        owl = Graph.from_ids(set().union(ont.default_graph.id_triples(),
                                         *(g.id_triples() for g in ont.named.values())))
    else:
        owl = bundled_ontology()
    summary = build_summary(ds, extract_rdfs_from_owl(owl))
    for label, items in (
        ("C", summary.used_classes),
        ("C'", summary.mo_related_classes),
        ("P1", summary.predicate_edges),
        ("P2", summary.subclass_edges),
        ("P3", summary.literal_predicates),
    ):
        rendered = sorted(" ".join(shorten(t) for t in (x if isinstance(x, tuple) else (x,))) for x in items)
        print(f"{label} ({len(rendered)})")
        for r in rendered:
            print(f"  {r}")
    if args.dot:
        _write(to_dot(summary), args.dot)


def cmd_gen(args):
    if args.size is not None:
        ds, manifests = build_corpus(args.size, args.seed)
        _write(serialize_trig(ds), args.out)
        if args.manifest:
            data = {shape: asdict(m) for shape, m in manifests.items()}
            _write(json.dumps(data, indent=1, sort_keys=True) + "\n", args.manifest)
        return
    if args.shape is None or args.artists is None:
        raise UsageError("gen needs --shape and --artists (or --size)")
    profile = GenProfile(args.shape, args.artists, args.records, args.tracks, args.seed)
    g, manifest = generate(profile)
    _write(serialize_ntriples(g), args.out)
    if args.manifest:
        _write(manifest.to_json() + "\n", args.manifest)


def _parse_size(text: str) -> int:
    t = text.strip().lower()
    scale = 1
    if t.endswith("k"):
        t, scale = t[:-1], 1000
    elif t.endswith("m"):
        t, scale = t[:-1], 1_000_000
    try:
        return int(float(t) * scale)
    except ValueError:
        raise ValueError(f"bad size {text!r}") from None


def cmd_bench_run(args):
    timeout = args.timeout if args.timeout is not None else (_env_timeout() or bench_mod.DEFAULT_TIMEOUT)
    corpus = bench_mod.load_corpus()
    report = bench_mod.BenchReport()
    for suite in args.suite:
        if suite == "1":
            ds, _ = build_corpus(args.test1_size, args.seed)
            repo = Repository()
            repo.dataset.default_graph = ds.default_graph
            repo.dataset.named.update(ds.named)
            report = report.merge(bench_mod.run_test1(corpus, repo, timeout))
        elif suite == "2":
            report = report.merge(bench_mod.run_test2())
        else:
            sizes = [_parse_size(s) for s in args.sizes.split(",")]
            flags = tuple(args.entailment.split(","))
            skip = bench_mod.UNION_QUERIES if args.skip_union else ()
            report = report.merge(bench_mod.run_test3(sizes, corpus, flags, timeout, skip, args.seed))
    if args.out:
        _write(report.to_json() + "\n", args.out)
    sys.stdout.write(bench_mod.render_text(report))
    failed = any(r["verdict"] != "pass" for r in report.test1 + report.test2)
    return 1 if failed and args.strict else 0


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="rdfviews", description="RDF store and query engine with views over datasets.")
    sub = p.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    repo = sub.add_parser("repo", help="manage repositories")
    repo_sub = repo.add_subparsers(dest="repo_command", metavar="ACTION")
    repo_sub.required = True
    create = repo_sub.add_parser("create", help="create a file-backed repository")
    create.add_argument("path")
    create.add_argument("--entailment", choices=["none", "rhodf"], default="none",
                        help="entailment regime, fixed for the repository's lifetime")
    create.add_argument("--force", action="store_true", help="reuse an existing repository directory")
    create.set_defaults(func=cmd_repo_create)

    load = sub.add_parser("load", help="load N-Triples or TriG files into a repository")
    load.add_argument("files", nargs="+", help="data files ('-' for standard input)")
    load.add_argument("--repo", required=True)
    load.add_argument("--graph", help="named graph for N-Triples input (default graph if omitted)")
    load.add_argument("--format", choices=["nt", "trig"], help="input format (default: by file suffix)")
    load.add_argument("--also-default", action="store_true",
                      help="also add loaded named-graph triples to the default graph")
    load.set_defaults(func=cmd_load)

    query = sub.add_parser("query", help="run a query; prints TSV, N-Triples or true/false")
    query.add_argument("--repo", required=True)
    query.add_argument("--file", help="query file ('-' for standard input)")
    query.add_argument("--query", help="query text")
    query.add_argument("--timeout", type=float, help="seconds (default: $RDFVIEWS_TIMEOUT or none)")
    query.set_defaults(func=cmd_query)

    view = sub.add_parser("view", help="define, drop, list and materialize views")
    view_sub = view.add_subparsers(dest="view_command", metavar="ACTION")
    view_sub.required = True
    define = view_sub.add_parser("define", help="register a view from a CONSTRUCT query file")
    define.add_argument("name", nargs="?", help="view IRI, <iri> or prefixed name such as def:query1")
    define.add_argument("file", nargs="?", help="file holding the CONSTRUCT query")
    define.add_argument("--trig", help="register every ng:definedBy view of a TriG document instead")
    define.add_argument("--repo", required=True)
    define.set_defaults(func=cmd_view_define)
    drop = view_sub.add_parser("drop", help="remove a view")
    drop.add_argument("name")
    drop.add_argument("--repo", required=True)
    drop.set_defaults(func=cmd_view_drop)
    lst = view_sub.add_parser("list", help="list views with their state and dependencies")
    lst.add_argument("--repo", required=True)
    lst.set_defaults(func=cmd_view_list)
    mat = view_sub.add_parser("materialize", help="store a view's extent")
    mat.add_argument("name")
    mat.add_argument("--repo", required=True)
    mat.add_argument("--out", help="also write the extent as N-Triples")
    mat.add_argument("--timeout", type=float)
    mat.set_defaults(func=cmd_view_materialize)

    schema = sub.add_parser("schema", help="schema summaries")
    schema_sub = schema.add_subparsers(dest="schema_command", metavar="ACTION")
    schema_sub.required = True
    summ = schema_sub.add_parser("summarize", help="summarize the classes and predicates used by data")
    summ.add_argument("data", nargs="+", help="N-Triples or TriG data files")
    summ.add_argument("--ontology", help="OWL ontology (N-Triples or TriG); default: bundled MO subset")
    summ.add_argument("--dot", help="write a Graphviz diagram to this file ('-' for standard output)")
    summ.set_defaults(func=cmd_schema_summarize)

    gen = sub.add_parser("gen", help="generate synthetic music data")
    gen.add_argument("--shape", choices=SHAPES)
    gen.add_argument("--artists", type=int)
    gen.add_argument("--records", type=int, default=2, help="records per artist")
    gen.add_argument("--tracks", type=int, default=3, help="tracks per record")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--size", type=_parse_size,
                     help="generate a mixed corpus of about this many triples as TriG instead")
    gen.add_argument("--out", default="-")
    gen.add_argument("--manifest", help="write the ground-truth manifest (JSON) here")
    gen.set_defaults(func=cmd_gen)

    bench = sub.add_parser("bench", help="benchmark suites")
    bench_sub = bench.add_subparsers(dest="bench_command", metavar="ACTION")
    bench_sub.required = True
    run = bench_sub.add_parser("run", help="run benchmark suites and print report tables")
    run.add_argument("--suite", nargs="+", choices=["1", "2", "3"], default=["1", "2"])
    run.add_argument("--sizes", default="500k,1M,2M", help="comma-separated test 3 sizes")
    run.add_argument("--entailment", default="none", help="comma-separated regimes for test 3")
    run.add_argument("--skip-union", action="store_true", help="leave UNION queries out of test 3")
    run.add_argument("--test1-size", type=_parse_size, default=10_000)
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--timeout", type=float, help="per-cell timeout in seconds (default 300)")
    run.add_argument("--out", help="write the JSON report here")
    run.add_argument("--strict", action="store_true", help="exit 1 if any test 1 or 2 verdict fails")
    run.set_defaults(func=cmd_bench_run)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args) or 0
    except UsageError as e:
        print(f"rdfviews: {e}", file=sys.stderr)
        return 1
    except USER_ERRORS as e:
        print(f"rdfviews: {type(e).__name__}: {e}", file=sys.stderr)
        return 1
    except Exception:  # noqa: BLE001
        traceback.print_exc()
        return 2


if __name__ == "__main__":
    sys.exit(main())
