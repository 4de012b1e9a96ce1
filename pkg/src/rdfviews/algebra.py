"""Query evaluation.

Solutions are plain dicts from variable name to term id; terms are only
materialized when a filter or ORDER BY needs them, or when results leave the
engine.  Blank nodes in WHERE-clause patterns behave as variables scoped to
their basic graph pattern.
"""

from __future__ import annotations

import re
import time
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional

from .graph import Dataset, Graph, merge_graphs
from .terms import (
    KIND_IRI,
    KIND_LITERAL,
    TERMS,
    XSD,
    IRI,
    BNode,
    Literal,
)
from .sparql.ast import (
    And,
    Ask,
    Bgp,
    Bound,
    Compare,
    Const,
    Construct,
    Filtered,
    From,
    FromInline,
    FromNamed,
    FromNamedInline,
    GraphAt,
    Group,
    IsIri,
    Not,
    Optional_,
    Or,
    Query,
    Regex,
    Str,
    Union_,
    Var,
    pattern_variables,
)

ENTAILMENT_REGIMES = ("none", "rhodf")

# rough per-operation costs used to pick between probing the index once per
# solution and scanning the pattern once for a hash join
_PROBE_COST = 12.0
_ROW_COST = 1.0


class QueryError(Exception):
    """A query that cannot be evaluated (unresolvable dataset, cycle, ...)."""


class QueryTimeout(QueryError):
    pass


class _Error:
    """The third truth value of filter evaluation."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "ERROR"

    def __bool__(self):
        raise TypeError("ERROR has no boolean value")


ERROR = _Error()


@dataclass
class EvalContext:
    """Evaluation state for one pattern evaluation.

    ``resolver`` maps a graph IRI to ``(graph, entailed)`` or None; it is
    consulted for GRAPH names not declared in the query's own dataset.
    """

    dataset: Dataset
    active_graph: Graph
    entailment: str = "none"
    resolver: Optional[Callable] = None
    active_entailed: bool = True
    named_entailed: dict = field(default_factory=dict)  # name -> bool
    graph_names: Optional[list] = None  # candidates for GRAPH ?var
    deadline: Optional[float] = None
    in_flight: frozenset = frozenset()

    @classmethod
    def for_graph(cls, graph: Graph, entailment: str = "none", named: Optional[dict] = None):
        return cls(Dataset(graph, dict(named or {})), graph, entailment)

    def with_active(self, graph: Graph, entailed: bool) -> "EvalContext":
        return EvalContext(
            self.dataset, graph, self.entailment, self.resolver, entailed,
            self.named_entailed, self.graph_names, self.deadline, self.in_flight,
        )

    def check(self):
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise QueryTimeout("query exceeded its time budget")

    def match_graph(self) -> Graph:
        if self.entailment == "rhodf" and self.active_entailed:
            from .entailment import rho_closure

            return rho_closure(self.active_graph)
        return self.active_graph

    def named_graph(self, name: IRI):
        g = self.dataset.named.get(name)
        if g is not None:
            return g, self.named_entailed.get(name, True)
        if self.resolver is not None:
            return self.resolver(name)
        return None


# ---------------------------------------------------------------------------
# Basic graph patterns


def _compile_bgp(patterns) -> Optional[list]:
    """Slots per pattern: int = constant id, str = variable name.

    Returns None when a constant was never interned (nothing can match).
    """
    out = []
    for tp in patterns:
        slots = []
        for t in tp:
            if isinstance(t, Var):
                slots.append(t.name)
            elif isinstance(t, BNode):
                slots.append("_:" + t.label)
            else:
                tid = TERMS.lookup(t)
                if tid is None:
                    return None
                slots.append(tid)
        out.append(tuple(slots))
    return out


def _const_ids(slots):
    return [s if isinstance(s, int) else None for s in slots]


def _extend(sols: list, slots: tuple, bound: set, graph: Graph, ctx: EvalContext) -> list:
    """Join ``sols`` (all binding exactly ``bound``) with one triple pattern."""
    var_pos = [(i, s) for i, s in enumerate(slots) if isinstance(s, str)]
    new_vars = []
    seen_new: dict = {}
    repeats = []  # (pos, earlier pos) for a new variable used twice
    for i, v in var_pos:
        if v in bound:
            continue
        if v in seen_new:
            repeats.append((i, seen_new[v]))
        else:
            seen_new[v] = i
            new_vars.append((i, v))
    shared = [(i, v) for i, v in var_pos if v in bound]

    if not new_vars:
        # every position is fixed per solution: a membership test
        triples = graph.id_triples()
        out = []
        for m in sols:
            key = tuple(m[s] if isinstance(s, str) else s for s in slots)
            if key in triples:
                out.append(m)
        return out

    consts = _const_ids(slots)
    scan = graph.count_ids(*consts)
    if scan == 0:
        return []
    out = []
    if shared and len(sols) * _PROBE_COST < scan * _ROW_COST:
        for n, m in enumerate(sols):
            if not n & 1023:
                ctx.check()
            probe = list(consts)
            for i, v in shared:
                probe[i] = m[v]
            for row in graph.match_ids(*probe):
                if repeats and any(row[i] != row[j] for i, j in repeats):
                    continue
                ext = dict(m)
                for i, v in new_vars:
                    ext[v] = row[i]
                out.append(ext)
        return out

    rows = graph.match_ids(*consts)
    ctx.check()
    if repeats:
        rows = [r for r in rows if all(r[i] == r[j] for i, j in repeats)]
    shared_pos = [i for i, _ in shared]
    shared_vars = [v for _, v in shared]
    if not shared:
        if len(new_vars) == 1:
            (i, v), = new_vars
            return [{**m, v: r[i]} for m in sols for r in rows]
        out = []
        for m in sols:
            for r in rows:
                ext = dict(m)
                for i, v in new_vars:
                    ext[v] = r[i]
                out.append(ext)
        return out
    index: dict = {}
    if len(shared_pos) == 1:
        (sp,) = shared_pos
        for r in rows:
            index.setdefault(r[sp], []).append(r)
        (sv,) = shared_vars
        keyf = lambda m: m[sv]  # noqa: E731
    else:
        # a variable at two positions is covered: equal keys imply equal ids
        for r in rows:
            index.setdefault(tuple(r[i] for i in shared_pos), []).append(r)
        keyf = lambda m: tuple(m[v] for v in shared_vars)  # noqa: E731
    ctx.check()
    for m in sols:
        bucket = index.get(keyf(m))
        if bucket is None:
            continue
        for r in bucket:
            ext = dict(m)
            for i, v in new_vars:
                ext[v] = r[i]
            out.append(ext)
    return out


def _eval_bgp(patterns, ctx: EvalContext) -> list:
    if not patterns:
        return [{}]
    compiled = _compile_bgp(patterns)
    if compiled is None:
        return []
    graph = ctx.match_graph()
    counts = {}
    for slots in compiled:
        if slots not in counts:
            counts[slots] = graph.count_ids(*_const_ids(slots))
            if counts[slots] == 0:
                return []
    remaining = list(compiled)
    sols = [{}]
    bound: set = set()
    while remaining:
        def score(slots):
            connected = any(isinstance(s, str) and s in bound for s in slots)
            c = counts[slots]
            return (0 if connected or not bound or c <= 1 else 1, c)

        best = min(remaining, key=score)
        remaining.remove(best)
        sols = _extend(sols, best, bound, graph, ctx)
        bound.update(s for s in best if isinstance(s, str))
        if not sols:
            return []
    hidden = [v for v in bound if v.startswith("_:")]
    if hidden:
        for m in sols:
            for v in hidden:
                del m[v]
    return sols


# ---------------------------------------------------------------------------
# Joins


def _domains(sols: list):
    """(variables bound in every mapping, variables bound in some mapping)."""
    if not sols:
        return set(), set()
    shapes = {frozenset(m) for m in sols}
    return set(frozenset.intersection(*shapes)), set(frozenset.union(*shapes))


def _compatible(a: dict, b: dict) -> bool:
    for k, v in b.items():
        w = a.get(k)
        if w is not None and w != v:
            return False
    return True


def _hash_pairs(left: list, right: list):
    """Yield (l, r) for every compatible pair of mappings."""
    l_all, l_any = _domains(left)
    r_all, r_any = _domains(right)
    key_vars = sorted(l_all & r_all)
    needs_check = bool((l_any & r_any) - set(key_vars))
    index: dict = {}
    for r in right:
        index.setdefault(tuple(r[v] for v in key_vars), []).append(r)
    for l in left:
        for r in index.get(tuple(l[v] for v in key_vars), ()):
            if needs_check and not _compatible(l, r):
                continue
            yield l, r


def _join(left: list, right: list, ctx: EvalContext) -> list:
    if not left or not right:
        return []
    if right == [{}]:
        return left
    if left == [{}]:
        return right
    out = []
    for n, (l, r) in enumerate(_hash_pairs(left, right)):
        if not n & 4095:
            ctx.check()
        out.append({**l, **r})
    return out


def _left_join(left: list, right: list, cond, ctx: EvalContext) -> list:
    if not left:
        return []
    if not right:
        return left
    extended: dict = {}
    for n, (l, r) in enumerate(_hash_pairs(left, right)):
        if not n & 4095:
            ctx.check()
        merged = {**l, **r}
        if cond is not None and _truth(_eval_expr(cond, merged)) is not True:
            continue
        extended.setdefault(id(l), []).append(merged)
    out = []
    for l in left:
        ext = extended.get(id(l))
        if ext:
            out.extend(ext)
        else:
            out.append(l)
    return out


# ---------------------------------------------------------------------------
# Graph patterns


def _eval(p, ctx: EvalContext) -> list:
    ctx.check()
    if isinstance(p, Bgp):
        return _eval_bgp(p.triples, ctx)
    if isinstance(p, Group):
        sols = [{}]
        for member in p.members:
            if isinstance(member, Optional_):
                inner = member.pattern
                cond = None
                if isinstance(inner, Filtered):
                    inner, cond = inner.pattern, inner.expr
                sols = _left_join(sols, _eval(inner, ctx), cond, ctx)
            else:
                sols = _join(sols, _eval(member, ctx), ctx)
            if not sols:
                return []
        return sols
    if isinstance(p, Optional_):
        # a lone OPTIONAL is a left join against the empty mapping
        return _eval(Group((p,)), ctx)
    if isinstance(p, Union_):
        return _eval(p.left, ctx) + _eval(p.right, ctx)
    if isinstance(p, Filtered):
        sols = _eval(p.pattern, ctx)
        return [m for m in sols if _truth(_eval_expr(p.expr, m)) is True]
    if isinstance(p, GraphAt):
        if isinstance(p.name, Var):
            out = []
            var = p.name.name
            for name in _graph_candidates(ctx):
                found = ctx.named_graph(name)
                if found is None:
                    continue
                gid = TERMS.intern(name)
                for m in _eval(p.pattern, ctx.with_active(*found)):
                    have = m.get(var)
                    if have is None:
                        m[var] = gid
                    elif have != gid:
                        continue
                    out.append(m)
            return out
        found = ctx.named_graph(p.name)
        if found is None:
            return []
        return _eval(p.pattern, ctx.with_active(*found))
    raise TypeError(f"not a graph pattern: {p!r}")


def _graph_candidates(ctx: EvalContext) -> list:
    if ctx.graph_names is not None:
        return ctx.graph_names
    return sorted(ctx.dataset.named, key=lambda i: i.value)


def _to_terms(m: dict) -> dict:
    term = TERMS.term
    return {k: term(v) for k, v in m.items()}


def eval_pattern(p, ctx: EvalContext) -> list:
    """Solutions of a graph pattern as a list of ``{variable: Term}`` dicts."""
    return [_to_terms(m) for m in _eval(p, ctx)]


# ---------------------------------------------------------------------------
# Filter expressions


_TRUE = Literal("true", XSD + "boolean")
_FALSE = Literal("false", XSD + "boolean")


@lru_cache(maxsize=256)
def _regex(pattern: str, flags: str):
    return re.compile(pattern, re.IGNORECASE if "i" in flags else 0)


def _value(e, m: dict):
    """Evaluate to a Term, a bool, or ERROR."""
    if isinstance(e, Var):
        tid = m.get(e.name)
        return ERROR if tid is None else TERMS.term(tid)
    if isinstance(e, Const):
        return e.term
    if isinstance(e, Str):
        v = _value(e.arg, m)
        if isinstance(v, Literal):
            return Literal(v.lexical)
        if isinstance(v, IRI):
            return Literal(v.value)
        return ERROR
    return _eval_expr(e, m)


def _ebv(v):
    """Effective boolean value."""
    if v is ERROR or isinstance(v, bool):
        return v
    if isinstance(v, Literal):
        if v.datatype == XSD + "boolean":
            return v.lexical in ("true", "1")
        n = v.int_value()
        if n is not None and v.datatype is not None:
            return n != 0
        if v.datatype is None or v.datatype == XSD + "string":
            return v.lexical != ""
    return ERROR


def _truth(v):
    v = _ebv(v)
    return v if v is ERROR else bool(v)


def _compare(op: str, a, b):
    if a is ERROR or b is ERROR:
        return ERROR
    if isinstance(a, bool):
        a = _TRUE if a else _FALSE
    if isinstance(b, bool):
        b = _TRUE if b else _FALSE
    if isinstance(a, Literal) and isinstance(b, Literal):
        ia, ib = a.int_value(), b.int_value()
        if ia is not None and ib is not None:
            x, y = ia, ib
        elif op in ("=", "!="):
            return (a == b) == (op == "=")
        else:
            x, y = a.lexical, b.lexical
    elif op in ("=", "!="):
        return (a == b) == (op == "=")
    else:
        return ERROR
    if op == "=":
        return x == y
    if op == "!=":
        return x != y
    if op == "<":
        return x < y
    if op == ">":
        return x > y
    if op == "<=":
        return x <= y
    return x >= y


def _eval_expr(e, m: dict):
    if isinstance(e, Bound):
        return e.var.name in m
    if isinstance(e, Compare):
        return _compare(e.op, _value(e.left, m), _value(e.right, m))
    if isinstance(e, And):
        a, b = _truth(_value(e.left, m)), _truth(_value(e.right, m))
        if a is False or b is False:
            return False
        if a is ERROR or b is ERROR:
            return ERROR
        return True
    if isinstance(e, Or):
        a, b = _truth(_value(e.left, m)), _truth(_value(e.right, m))
        if a is True or b is True:
            return True
        if a is ERROR or b is ERROR:
            return ERROR
        return False
    if isinstance(e, Not):
        v = _truth(_value(e.arg, m))
        return v if v is ERROR else not v
    if isinstance(e, IsIri):
        v = _value(e.arg, m)
        return v if v is ERROR else isinstance(v, IRI)
    if isinstance(e, Regex):
        v = _value(e.arg, m)
        if not isinstance(v, Literal) or v.datatype not in (None, XSD + "string"):
            return ERROR
        try:
            return _regex(e.pattern, e.flags).search(v.lexical) is not None
        except re.error:
            return ERROR
    if isinstance(e, (Var, Const, Str)):
        return _value(e, m)
    raise TypeError(f"not an expression: {e!r}")


def eval_filter_expr(e, mapping: dict):
    """Evaluate a filter expression against ``{variable: Term}``.

    Returns True, False or :data:`ERROR`.
    """
    ids = {k: TERMS.intern(v) for k, v in mapping.items() if v is not None}
    return _truth(_value(e, ids))


# ---------------------------------------------------------------------------
# Solution modifiers


def _order_key(v):
    if v is ERROR or v is None:
        return (0,)
    if isinstance(v, bool):
        v = _TRUE if v else _FALSE
    if isinstance(v, BNode):
        return (1, v.label)
    if isinstance(v, IRI):
        return (2, v.value)
    n = v.int_value()
    if n is not None:
        return (3, 0, n, v.lexical)
    return (3, 1, v.lexical, v.datatype or "", v.language or "")


def order_solutions(sols: list, conditions) -> list:
    """Stable sort of ``{variable: Term}`` solutions by ORDER BY conditions."""
    ids = [{k: TERMS.intern(v) for k, v in m.items()} for m in sols]
    order = {id(m): i for i, m in enumerate(ids)}
    return [sols[order[id(m)]] for m in _order(ids, conditions)]


def _order(sols: list, conditions) -> list:
    out = list(sols)
    for cond in reversed(conditions):
        keyed = [(_order_key(_value(cond.expr, m)), i) for i, m in enumerate(out)]
        keyed.sort(key=lambda k: k[0], reverse=cond.descending)
        out = [out[i] for _, i in keyed]
    return out


def _slice(sols: list, q: Query) -> list:
    start = q.offset or 0
    end = None if q.limit is None else start + q.limit
    if start or end is not None:
        return sols[start:end]
    return sols


@dataclass
class SelectResult:
    """Projected solution sequence of a SELECT query."""

    variables: list
    rows: list  # tuples of Term-or-None, aligned with ``variables``

    def __len__(self):
        return len(self.rows)

    def mappings(self) -> list:
        return [{v: t for v, t in zip(self.variables, row) if t is not None} for row in self.rows]

    def to_tsv(self) -> str:
        lines = ["\t".join("?" + v for v in self.variables)]
        for row in self.rows:
            lines.append("\t".join("" if t is None else t.n3() for t in row))
        return "\n".join(lines) + "\n"


def construct_instantiate(template, solutions) -> Graph:
    """Instantiate a CONSTRUCT template once per solution.

    ``solutions`` holds ``{variable: Term}`` dicts (or id dicts, as produced
    internally).  Template blank nodes get a label derived from the template
    label and the solution ordinal.  Triples with unbound variables or
    ill-placed terms are dropped.
    """
    ids = [
        m if all(isinstance(v, int) for v in m.values()) else {k: TERMS.intern(v) for k, v in m.items()}
        for m in solutions
    ]
    return _instantiate(template, ids)


def _instantiate(template, sols: list) -> Graph:
    kinds = TERMS.kinds
    compiled = []
    bnode_labels = []
    for tp in template:
        slots = []
        for t in tp:
            if isinstance(t, Var):
                slots.append(t.name)
            elif isinstance(t, BNode):
                slots.append(("b", t.label))
                bnode_labels.append(t.label)
            else:
                slots.append(TERMS.intern(t))
        compiled.append(slots)
    out = set()
    intern = TERMS.intern
    for n, m in enumerate(sols):
        fresh = {lab: intern(BNode(f"{lab}_{n}")) for lab in bnode_labels} if bnode_labels else None
        for slots in compiled:
            triple = []
            for s in slots:
                if isinstance(s, int):
                    triple.append(s)
                elif isinstance(s, str):
                    tid = m.get(s)
                    if tid is None:
                        break
                    triple.append(tid)
                else:
                    triple.append(fresh[s[1]])
            else:
                s_, p_, o_ = triple
                if kinds[s_] == KIND_LITERAL or kinds[p_] != KIND_IRI:
                    continue
                out.add((s_, p_, o_))
    return Graph.from_ids(out)


# ---------------------------------------------------------------------------
# Queries


class _Resolver:
    """Graph lookup for one query: loaded graphs first, then views.

    View extents are cached for the lifetime of the query.
    """

    def __init__(self, ds: Dataset, registry, overrides: Optional[dict], deadline=None):
        self.ds = ds
        self.deadline = deadline
        self.registry = registry
        self.overrides = overrides or {}
        self.cache: dict = {}

    def __call__(self, name: IRI):
        if name in self.overrides:
            return self.overrides[name], False
        g = self.ds.named.get(name)
        if g is not None:
            return g, True
        if self.registry is not None and name in self.registry:
            if name not in self.cache:
                timeout = None if self.deadline is None else max(0.0, self.deadline - time.monotonic())
                self.cache[name] = self.registry.resolve(name, timeout)
            return self.cache[name], False
        return None


def _query_context(q: Query, ds: Dataset, registry, entailment: str, deadline, overrides,
                   resolver: Optional[_Resolver] = None) -> EvalContext:
    resolver = resolver or _Resolver(ds, registry, overrides, deadline)
    from_graphs = []
    from_entailed = False
    named: dict = {}
    named_entailed: dict = {}
    declared: list = []

    def sub(inner: Query) -> Graph:
        return _run(inner, ds, registry, entailment, deadline, overrides, resolver)

    for clause in q.dataset:
        if isinstance(clause, From):
            found = resolver(clause.iri)
            if found is None:
                raise QueryError(f"unresolvable FROM target {clause.iri.n3()}")
            from_graphs.append(found[0])
            from_entailed = from_entailed or found[1]
        elif isinstance(clause, FromInline):
            from_graphs.append(sub(clause.query))
        elif isinstance(clause, FromNamed):
            found = resolver(clause.iri)
            if found is None:
                raise QueryError(f"unresolvable FROM NAMED target {clause.iri.n3()}")
            named[clause.iri], named_entailed[clause.iri] = found
            declared.append(clause.iri)
        elif isinstance(clause, FromNamedInline):
            named[clause.iri] = sub(clause.query)
            named_entailed[clause.iri] = False
            declared.append(clause.iri)

    if any(isinstance(c, (From, FromInline)) for c in q.dataset):
        background = merge_graphs(from_graphs)
        entailed = from_entailed
    else:
        background = ds.default_graph
        entailed = True
    # GRAPH ?g ranges over the declared named graphs, or else over the
    # repository's loaded named graphs (views are never enumerated)
    if declared:
        graph_names = list(dict.fromkeys(declared))
    else:
        graph_names = sorted(ds.named, key=lambda i: i.value)
    return EvalContext(
        dataset=Dataset(background, named),
        active_graph=background,
        entailment=entailment,
        resolver=resolver,
        active_entailed=entailed,
        named_entailed=named_entailed,
        graph_names=graph_names,
        deadline=deadline,
    )


def _components(members) -> list:
    """Partition group members into groups connected by shared variables."""
    comps: list = []  # [(variable names, members)]
    for m in members:
        names = set(pattern_variables(m))
        hit = [c for c in comps if c[0] & names]
        merged = (names.union(*(c[0] for c in hit)), [x for c in hit for x in c[1]] + [m])
        comps = [c for c in comps if not any(c is h for h in hit)] + [merged]
    return comps


def _construct_split(template, comps, ctx: EvalContext) -> Graph:
    """CONSTRUCT over a join of variable-disjoint parts without forming the product.

    The solutions are the cartesian product of the parts' solutions, so a
    template triple only needs the parts whose variables it mentions.
    """
    solved = []
    for names, members in comps:
        sols = _eval(members[0] if len(members) == 1 else Group(tuple(members)), ctx)
        if not sols:
            return Graph()
        solved.append((names, sols))
    by_parts: dict = {}
    for tp in template:
        used = {t.name for t in tp if isinstance(t, Var)}
        touched = tuple(i for i, (names, _) in enumerate(solved) if names & used)
        by_parts.setdefault(touched, []).append(tp)
    out: set = set()
    for touched, triples in by_parts.items():
        sols = [{}]
        for i in touched:
            sols = _join(sols, solved[i][1], ctx)
        out |= _instantiate(triples, sols).id_triples()
    return Graph.from_ids(out)


def _splittable(q: Query) -> bool:
    p = q.pattern
    return (
        isinstance(p, Group)
        and q.limit is None
        and q.offset is None
        and not any(isinstance(m, Optional_) for m in p.members)
        and not any(isinstance(t, BNode) for tp in q.form.template for t in tp)
    )


def _run(q: Query, ds, registry, entailment, deadline, overrides, resolver=None):
    ctx = _query_context(q, ds, registry, entailment, deadline, overrides, resolver)
    form = q.form
    if isinstance(form, Construct) and _splittable(q):
        comps = _components(q.pattern.members)
        if len(comps) > 1:
            return _construct_split(form.template, comps, ctx)
    sols = _eval(q.pattern, ctx)
    if isinstance(form, Ask):
        return bool(sols)
    if q.order_by:
        sols = _order(sols, q.order_by)
    if isinstance(form, Construct):
        return _instantiate(form.template, _slice(sols, q))
    names = [v.name for v in form.variables] if form.variables is not None else pattern_variables(q.pattern)
    term = TERMS.term
    rows = [tuple(term(m[v]) if v in m else None for v in names) for m in sols]
    if form.distinct:
        rows = list(dict.fromkeys(rows))
    start = q.offset or 0
    end = None if q.limit is None else start + q.limit
    return SelectResult(names, rows[start:end])


def eval_query(q: Query, ds: Dataset, registry=None, *, entailment: str = "none",
               timeout: Optional[float] = None, overrides: Optional[dict] = None):
    """Evaluate a query against a repository dataset.

    Returns a :class:`SelectResult` for SELECT, a bool for ASK and a
    :class:`Graph` for CONSTRUCT.  ``registry`` (anything with ``__contains__``
    and ``resolve(name) -> Graph``) makes views addressable by name wherever a
    graph IRI may appear; loaded graphs shadow views of the same name.
    ``overrides`` pins graph names to fixed graphs (used by fixpoint
    iteration).
    """
    if entailment not in ENTAILMENT_REGIMES:
        raise ValueError(f"unknown entailment regime {entailment!r}")
    deadline = None if timeout is None else time.monotonic() + timeout
    return _run(q, ds, registry, entailment, deadline, overrides)


__all__ = [
    "ERROR",
    "ENTAILMENT_REGIMES",
    "EvalContext",
    "QueryError",
    "QueryTimeout",
    "SelectResult",
    "construct_instantiate",
    "eval_filter_expr",
    "eval_pattern",
    "eval_query",
    "order_solutions",
]
