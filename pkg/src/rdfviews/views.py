"""Views: named CONSTRUCT queries usable wherever a graph name is.

A :class:`ViewRegistry` stores view definitions over a base dataset, tracks
the dependency graph between views, evaluates views on demand (least
fixpoint for recursive ones) and keeps materialized extents with explicit
staleness.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .algebra import QueryError, eval_query
from .graph import Dataset, Graph
from .sparql.ast import (
    Bgp,
    Filtered,
    From,
    FromInline,
    FromNamed,
    FromNamedInline,
    GraphAt,
    Group,
    Optional_,
    Query,
    Union_,
    has_negated_bound,
)
from .sparql.parser import engine_prefixes, iter_view_defs, parse_query
from .terms import DEFAULT_PREFIXES, NG, NG_QUERY, IRI, Literal


class ViewError(Exception):
    pass


class DuplicateViewError(ViewError):
    pass


class UnknownViewError(ViewError, KeyError):
    def __str__(self):
        return ViewError.__str__(self)


class StratificationError(ViewError):
    """Recursion through negation between views."""


@dataclass(frozen=True)
class ViewDef:
    name: IRI
    query: Query
    source_text: str = ""
    # prefix declarations (beyond the engine defaults) the source text needs
    prefixes: tuple = ()

    def __post_init__(self):
        if not isinstance(self.name, IRI):
            raise ViewError(f"view name must be an IRI, got {self.name!r}")
        if not self.query.is_construct:
            raise ViewError(f"view {self.name.n3()} must be defined by a CONSTRUCT query")

    @classmethod
    def from_text(cls, name: IRI, text: str, prefixes: Optional[dict] = None) -> "ViewDef":
        q = parse_query(text, prefixes)
        if not q.is_construct:
            raise ViewError(f"view {name.n3()} must be defined by a CONSTRUCT query")
        return cls(name, q, text, _extra_prefixes(prefixes))


def _extra_prefixes(prefixes: Optional[dict]) -> tuple:
    if not prefixes:
        return ()
    defaults = engine_prefixes()
    return tuple(sorted((k, v) for k, v in prefixes.items() if defaults.get(k) != v))


# ---------------------------------------------------------------------------
# Dependency analysis


def query_references(q: Query) -> set:
    """Graph IRIs a query reads through FROM, FROM NAMED or GRAPH."""
    refs: set = set()
    local = {c.iri for c in q.dataset if isinstance(c, FromNamedInline)}
    for c in q.dataset:
        if isinstance(c, (From, FromNamed)):
            refs.add(c.iri)
        elif isinstance(c, (FromInline, FromNamedInline)):
            refs |= query_references(c.query)
    refs |= {n for n in _graph_names(q.pattern) if n not in local}
    return refs


def _graph_names(p) -> set:
    if isinstance(p, GraphAt):
        own = {p.name} if isinstance(p.name, IRI) else set()
        return own | _graph_names(p.pattern)
    if isinstance(p, Group):
        return set().union(*(_graph_names(m) for m in p.members)) if p.members else set()
    if isinstance(p, (Optional_, Filtered)):
        return _graph_names(p.pattern)
    if isinstance(p, Union_):
        return _graph_names(p.left) | _graph_names(p.right)
    return set()


def _pattern_reads(p, background: set) -> set:
    """Graph IRIs a pattern reads, counting BGPs as reads of ``background``."""
    if isinstance(p, Bgp):
        return set(background) if p.triples else set()
    if isinstance(p, GraphAt):
        inner = _pattern_reads(p.pattern, set())
        if isinstance(p.name, IRI):
            inner.add(p.name)
        return inner
    if isinstance(p, Group):
        return set().union(*(_pattern_reads(m, background) for m in p.members)) if p.members else set()
    if isinstance(p, (Optional_, Filtered)):
        return _pattern_reads(p.pattern, background)
    if isinstance(p, Union_):
        return _pattern_reads(p.left, background) | _pattern_reads(p.right, background)
    return set()


def _negated_reads(p, background: set) -> set:
    """Graphs read under negation by failure.

    Two shapes count: a FILTER with a negated BOUND over a group holding an
    OPTIONAL, and an OPTIONAL whose own filter has a negated BOUND.  The
    graphs read by those OPTIONAL parts are returned.
    """
    out: set = set()
    if isinstance(p, Filtered):
        if has_negated_bound(p.expr):
            for opt in _optionals(p.pattern):
                out |= _pattern_reads(opt.pattern, background)
        out |= _negated_reads(p.pattern, background)
    elif isinstance(p, Optional_):
        inner = p.pattern
        if isinstance(inner, Filtered) and has_negated_bound(inner.expr):
            out |= _pattern_reads(inner.pattern, background)
        out |= _negated_reads(inner, background)
    elif isinstance(p, Group):
        for m in p.members:
            out |= _negated_reads(m, background)
    elif isinstance(p, Union_):
        out |= _negated_reads(p.left, background) | _negated_reads(p.right, background)
    elif isinstance(p, GraphAt):
        out |= _negated_reads(p.pattern, set())
    return out


def _optionals(p) -> list:
    if isinstance(p, Optional_):
        return [p]
    if isinstance(p, Group):
        return [o for m in p.members for o in _optionals(m)]
    if isinstance(p, Filtered):
        return _optionals(p.pattern)
    return []


def negated_references(q: Query) -> set:
    """Graph IRIs that ``q`` reads under negation by failure."""
    background = {c.iri for c in q.dataset if isinstance(c, From)}
    local = {c.iri for c in q.dataset if isinstance(c, FromNamedInline)}
    out = {n for n in _negated_reads(q.pattern, background) if n not in local}
    for c in q.dataset:
        if isinstance(c, (FromInline, FromNamedInline)):
            out |= negated_references(c.query)
    return out


def strongly_connected_components(nodes: Iterable, edges: dict) -> list:
    """Tarjan's algorithm; components come out in reverse topological order
    (a component is listed after every component it depends on)."""
    index: dict = {}
    low: dict = {}
    on_stack: set = set()
    stack: list = []
    out: list = []
    counter = 0

    for root in nodes:
        if root in index:
            continue
        # iterative DFS: frames of (node, iterator over successors)
        work = [(root, iter(edges.get(root, ())))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(edges.get(w, ()))))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                out.append(comp)
    return out


# ---------------------------------------------------------------------------
# Registry


@dataclass
class _Extent:
    graph: Graph
    stale: bool = False
    fingerprint: tuple = field(default=())


class ViewRegistry:
    """Views over a base dataset.

    ``dataset`` is the repository's loaded data and ``entailment`` the
    repository's regime; view queries are always evaluated against these,
    never against the dataset of the query that mentions the view.
    """

    def __init__(self, dataset: Optional[Dataset] = None, entailment: str = "none"):
        self.dataset = dataset if dataset is not None else Dataset()
        self.entailment = entailment
        self._views: dict = {}
        self._extents: dict = {}
        self._lock = threading.RLock()
        self._local = threading.local()
        self.fixpoint_rounds: dict = {}  # name -> rounds of the last fixpoint

    # -- lookup ------------------------------------------------------------

    def __contains__(self, name) -> bool:
        return name in self._views and name not in self.dataset.named

    def __iter__(self):
        return iter(list(self._views))

    def __len__(self):
        return len(self._views)

    def get(self, name: IRI) -> ViewDef:
        try:
            return self._views[name]
        except KeyError:
            raise UnknownViewError(f"unknown view {name.n3()}") from None

    def definitions(self) -> list:
        return list(self._views.values())

    def deps(self, name: IRI) -> set:
        """Registered views that ``name`` reads directly."""
        refs = query_references(self.get(name).query)
        return {r for r in refs if r in self}

    def dependency_graph(self) -> dict:
        return {n: sorted(self.deps(n), key=lambda i: i.value) for n in self._views}

    def components(self) -> list:
        names = sorted(self._views, key=lambda i: i.value)
        return strongly_connected_components(names, self.dependency_graph())

    def _component_of(self, name: IRI) -> list:
        for comp in self.components():
            if name in comp:
                return comp
        raise UnknownViewError(f"unknown view {name.n3()}")

    def _is_recursive(self, comp: list) -> bool:
        return len(comp) > 1 or comp[0] in self.deps(comp[0])

    # -- mutation ----------------------------------------------------------

    def register(self, view: ViewDef) -> None:
        with self._lock:
            if view.name in self._views:
                raise DuplicateViewError(f"view {view.name.n3()} is already defined")
            if view.name in self.dataset.named:
                raise DuplicateViewError(f"{view.name.n3()} already names a loaded graph")
            self._views[view.name] = view
            try:
                self._check_stratified()
            except StratificationError:
                del self._views[view.name]
                raise
            self._invalidate_dependents(view.name)

    def register_query(self, name: IRI, query: Query, source_text: str = "") -> ViewDef:
        view = ViewDef(name, query, source_text)
        self.register(view)
        return view

    def drop(self, name: IRI) -> None:
        with self._lock:
            self.get(name)
            del self._views[name]
            self._extents.pop(name, None)
            self._invalidate_dependents(name)

    def _check_stratified(self) -> None:
        for comp in self.components():
            if not self._is_recursive(comp):
                continue
            members = set(comp)
            for v in comp:
                bad = negated_references(self._views[v].query) & members
                if bad:
                    cycle = " -> ".join(n.n3() for n in sorted(comp, key=lambda i: i.value))
                    raise StratificationError(
                        f"view {v.n3()} negates {min(bad, key=lambda i: i.value).n3()} inside a "
                        f"recursive cycle ({cycle})"
                    )

    def _dependents(self, name: IRI) -> set:
        """Views whose results may depend on ``name``, transitively."""
        reverse: dict = {}
        for v, view in self._views.items():
            for r in query_references(view.query):
                reverse.setdefault(r, set()).add(v)
        out: set = set()
        todo = [name]
        while todo:
            n = todo.pop()
            for v in reverse.get(n, ()):
                if v not in out:
                    out.add(v)
                    todo.append(v)
        return out

    def _invalidate_dependents(self, name: IRI) -> None:
        for v in self._dependents(name):
            ext = self._extents.get(v)
            if ext is not None:
                ext.stale = True

    def invalidate_all(self) -> None:
        """Mark every extent stale (base data changed)."""
        with self._lock:
            for ext in self._extents.values():
                ext.stale = True

    # -- evaluation --------------------------------------------------------

    def _fingerprint(self) -> tuple:
        ds = self.dataset
        named = tuple(sorted((n.value, id(g), g.version) for n, g in ds.named.items()))
        return (id(ds.default_graph), ds.default_graph.version, named)

    def is_materialized(self, name: IRI) -> bool:
        return name in self._extents

    def is_fresh(self, name: IRI) -> bool:
        ext = self._extents.get(name)
        return ext is not None and not ext.stale and ext.fingerprint == self._fingerprint()

    def stored_extent(self, name: IRI) -> Optional[Graph]:
        ext = self._extents.get(name)
        return None if ext is None else ext.graph

    def _in_flight(self) -> set:
        if not hasattr(self._local, "names"):
            self._local.names = set()
        return self._local.names

    def resolve(self, name: IRI, timeout: Optional[float] = None) -> Graph:
        """The extent of a view: stored if fresh, otherwise evaluated."""
        view = self.get(name)
        if self.is_fresh(name):
            return self._extents[name].graph
        in_flight = self._in_flight()
        if name in in_flight:
            raise QueryError(f"view {name.n3()} depends on itself outside a fixpoint")
        comp = self._component_of(name)
        in_flight.update(comp)
        try:
            if self._is_recursive(comp):
                return self._fixpoint(comp, timeout)[name]
            return eval_query(view.query, self.dataset, self, entailment=self.entailment, timeout=timeout)
        finally:
            in_flight.difference_update(comp)

    def _fixpoint(self, comp: list, timeout: Optional[float]) -> dict:
        """Least fixpoint of a monotone recursive component.

        Every member starts empty; each round re-evaluates all members with
        the previous round's extents pinned in place of the member names.
        """
        members = sorted(comp, key=lambda i: i.value)
        extents = {m: Graph() for m in members}
        rounds = 0
        while True:
            rounds += 1
            new = {}
            for m in members:
                new[m] = eval_query(
                    self._views[m].query, self.dataset, self,
                    entailment=self.entailment, timeout=timeout, overrides=extents,
                )
            grew = False
            for m in members:
                old_ids, new_ids = extents[m].id_triples(), new[m].id_triples()
                if not old_ids <= new_ids:
                    raise QueryError(f"view {m.n3()} shrank during fixpoint iteration")
                grew = grew or len(new_ids) > len(old_ids)
            extents = new
            if not grew:
                break
        for m in members:
            self.fixpoint_rounds[m] = rounds
        return extents

    def materialize(self, name: IRI, timeout: Optional[float] = None) -> Graph:
        """Store the current extent of ``name``; a no-op when already fresh."""
        with self._lock:
            if self.is_fresh(name):
                return self._extents[name].graph
            graph = self.resolve(name, timeout)
            self._extents[name] = _Extent(graph, False, self._fingerprint())
            return graph

    def install_extent(self, name: IRI, graph: Graph, fresh: bool = True) -> None:
        """Adopt a previously stored extent (used when reopening a repository)."""
        self.get(name)
        self._extents[name] = _Extent(graph, not fresh, self._fingerprint())

    # -- persistence -------------------------------------------------------

    def load_trig(self, text: str, prefixes: Optional[dict] = None) -> list:
        """Register every view defined in a TriG document; returns their names."""
        names = []
        for name, q, source, block_prefixes in iter_view_defs(text, prefixes):
            self.register(ViewDef(name, q, source, _extra_prefixes(block_prefixes)))
            names.append(name)
        return names

    def dump_trig(self) -> str:
        """TriG document of ``ng:definedBy`` blocks, in registration order."""
        lines = [f"@prefix ng: <{NG}> ."]
        declared = {"ng": NG}
        for view in self._views.values():
            for k, v in view.prefixes:
                if declared.get(k) != v:
                    lines.append(f"@prefix {k}: <{v}> .")
                    declared[k] = v
            # restore defaults that an earlier view redeclared
            for k, v in DEFAULT_PREFIXES.items():
                if k in declared and declared[k] != v and k not in dict(view.prefixes):
                    lines.append(f"@prefix {k}: <{v}> .")
                    declared[k] = v
            text = view.source_text or _canonical(view.query)
            lit = Literal(text, NG_QUERY).n3()
            lines.append(f"{view.name.n3()} {{ {view.name.n3()} ng:definedBy {lit} . }}")
        return "\n".join(lines) + "\n"


def _canonical(q: Query) -> str:
    from .sparql.serializer import serialize_query

    return serialize_query(q)


def load_view_defs(text: str, prefixes: Optional[dict] = None) -> list:
    """Parse a TriG view document into :class:`ViewDef` objects."""
    return [
        ViewDef(name, q, source, _extra_prefixes(bp))
        for name, q, source, bp in iter_view_defs(text, prefixes)
    ]


__all__ = [
    "ViewDef",
    "ViewRegistry",
    "ViewError",
    "DuplicateViewError",
    "UnknownViewError",
    "StratificationError",
    "query_references",
    "negated_references",
    "strongly_connected_components",
    "load_view_defs",
]
