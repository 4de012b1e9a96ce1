"""Graph and Dataset containers.

A :class:`Graph` holds a set of id-encoded triples plus three sorted
permutation indexes (SPO, POS, OSP) built lazily with numpy.  Any
single-triple-pattern lookup is answered by one binary-search probe on the
index whose sort order puts the bound positions first.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional

import numpy as np

from .terms import (
    TERMS,
    IRI,
    KIND_BNODE,
    Term,
    TermError,
    Triple,
    fresh_bnode,
)

IdTriple = tuple  # (s_id, p_id, o_id)

# index name -> column order (positions of s/p/o)
ORDERS = {"spo": (0, 1, 2), "pos": (1, 2, 0), "osp": (2, 0, 1)}

# bound-position set -> best index
_BEST = {
    (): "spo",
    (0,): "spo",
    (1,): "pos",
    (2,): "osp",
    (0, 1): "spo",
    (1, 2): "pos",
    (0, 2): "osp",
}


class _Permutation:
    __slots__ = ("order", "cols")

    def __init__(self, arr: np.ndarray, order):
        self.order = order
        a, b, c = order
        if len(arr):
            perm = np.lexsort((arr[:, c], arr[:, b], arr[:, a]))
            self.cols = tuple(np.ascontiguousarray(arr[perm, k]) for k in order)
        else:
            empty = np.empty(0, dtype=np.int64)
            self.cols = (empty, empty, empty)

    def prefix_range(self, values) -> tuple:
        """[lo, hi) range of rows whose leading columns equal ``values``."""
        lo, hi = 0, len(self.cols[0])
        for col, v in zip(self.cols, values):
            seg = col[lo:hi]
            l2 = int(np.searchsorted(seg, v, "left"))
            h2 = int(np.searchsorted(seg, v, "right"))
            lo, hi = lo + l2, lo + h2
            if lo >= hi:
                return lo, lo
        return lo, hi

    def lookup(self, bound: dict) -> list:
        """All triples (in s,p,o order) matching ``bound`` (pos -> id)."""
        prefix = []
        for pos in self.order:
            if pos in bound:
                prefix.append(bound[pos])
            else:
                break
        lo, hi = self.prefix_range(prefix)
        if lo >= hi:
            return []
        segs = [c[lo:hi] for c in self.cols]
        rest = [(i, bound[pos]) for i, pos in enumerate(self.order) if pos in bound and i >= len(prefix)]
        if rest:
            mask = np.ones(hi - lo, dtype=bool)
            for i, v in rest:
                mask &= segs[i] == v
            segs = [s[mask] for s in segs]
        by_pos = [None, None, None]
        for i, pos in enumerate(self.order):
            by_pos[pos] = segs[i].tolist()
        return list(zip(*by_pos))


class Graph:
    """A set of RDF triples with permutation indexes.

    Mutation bumps :attr:`version`; indexes and any cached derived data
    (such as the entailment closure) are keyed on it.
    """

    def __init__(self, triples: Iterable = ()):
        self._triples: set = set()
        self.version = 0
        self._perms: Optional[dict] = None
        self._cache: dict = {}
        for t in triples:
            self.add(t)

    # -- construction ------------------------------------------------------

    def add(self, triple, p: Term = None, o: Term = None) -> None:
        """Add a :class:`Triple` or ``(s, p, o)`` term tuple."""
        if p is None:
            s, p, o = triple
        else:
            s = triple
        if isinstance(triple, Triple):
            ids = (TERMS.intern(s), TERMS.intern(p), TERMS.intern(o))
        else:
            Triple(s, p, o)  # positional validation
            ids = (TERMS.intern(s), TERMS.intern(p), TERMS.intern(o))
        self.add_ids(ids)

    def add_ids(self, ids: IdTriple) -> None:
        if ids not in self._triples:
            self._triples.add(ids)
            self._touch()

    def update_ids(self, many: Iterable) -> None:
        before = len(self._triples)
        self._triples.update(many)
        if len(self._triples) != before:
            self._touch()

    def discard(self, triple: Triple) -> None:
        ids = self._encode(triple)
        if ids is not None and ids in self._triples:
            self._triples.discard(ids)
            self._touch()

    def _touch(self):
        self.version += 1
        self._perms = None
        self._cache.clear()

    @classmethod
    def from_ids(cls, ids: Iterable) -> "Graph":
        g = cls()
        g._triples = set(ids)
        return g

    def copy(self) -> "Graph":
        return Graph.from_ids(self._triples)

    # -- access ------------------------------------------------------------

    def __len__(self):
        return len(self._triples)

    def __iter__(self) -> Iterator[Triple]:
        term = TERMS.term
        for s, p, o in self._triples:
            yield Triple(term(s), term(p), term(o))

    def id_triples(self):
        return self._triples

    def __contains__(self, triple) -> bool:
        ids = self._encode(triple)
        return ids is not None and ids in self._triples

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self._triples == other._triples

    def __hash__(self):
        return id(self)

    def __repr__(self):
        return f"<Graph {len(self)} triples>"

    @staticmethod
    def _encode(triple) -> Optional[IdTriple]:
        s, p, o = triple
        ids = (TERMS.lookup(s), TERMS.lookup(p), TERMS.lookup(o))
        return None if None in ids else ids

    def _indexes(self) -> dict:
        if self._perms is None:
            if self._triples:
                arr = np.fromiter(
                    (x for t in self._triples for x in t), dtype=np.int64, count=3 * len(self._triples)
                ).reshape(-1, 3)
            else:
                arr = np.empty((0, 3), dtype=np.int64)
            self._perms = {name: _Permutation(arr, order) for name, order in ORDERS.items()}
        return self._perms

    def match_ids(self, s: Optional[int] = None, p: Optional[int] = None, o: Optional[int] = None,
                  index: Optional[str] = None) -> list:
        """Id triples matching the given ids (None = wildcard)."""
        bound = {i: v for i, v in enumerate((s, p, o)) if v is not None}
        if len(bound) == 3:
            return [(s, p, o)] if (s, p, o) in self._triples else []
        if not self._triples:
            return []
        if not bound and index is None:
            return list(self._triples)
        name = index or _BEST[tuple(sorted(bound))]
        return self._indexes()[name].lookup(bound)

    def count_ids(self, s=None, p=None, o=None) -> int:
        """Exact number of triples matching a pattern (one index probe)."""
        bound = {i: v for i, v in enumerate((s, p, o)) if v is not None}
        if len(bound) == 3:
            return int((s, p, o) in self._triples)
        if not bound:
            return len(self._triples)
        if not self._triples:
            return 0
        perm = self._indexes()[_BEST[tuple(sorted(bound))]]
        lo, hi = perm.prefix_range([bound[pos] for pos in perm.order if pos in bound])
        return hi - lo

    def triples(self, s: Term = None, p: Term = None, o: Term = None) -> Iterator[Triple]:
        ids = []
        for t in (s, p, o):
            if t is None:
                ids.append(None)
            else:
                tid = TERMS.lookup(t)
                if tid is None:
                    return
                ids.append(tid)
        term = TERMS.term
        for a, b, c in self.match_ids(*ids):
            yield Triple(term(a), term(b), term(c))

    # -- set algebra -------------------------------------------------------

    def union(self, other: "Graph") -> "Graph":
        return Graph.from_ids(self._triples | other._triples)

    __or__ = union

    def has_bnodes(self) -> bool:
        kinds = TERMS.kinds
        return self.cached(
            "has_bnodes",
            lambda: any(kinds[s] == KIND_BNODE or kinds[o] == KIND_BNODE for s, _, o in self._triples),
        )

    def is_ground(self) -> bool:
        return not self.has_bnodes()

    def rename_bnodes(self) -> "Graph":
        """Copy of this graph with every blank node replaced by a fresh one."""
        kinds = TERMS.kinds
        mapping: dict = {}

        def fresh(tid):
            if kinds[tid] != KIND_BNODE:
                return tid
            if tid not in mapping:
                mapping[tid] = TERMS.intern(fresh_bnode())
            return mapping[tid]

        return Graph.from_ids((fresh(s), p, fresh(o)) for s, p, o in self._triples)

    def cached(self, key, factory):
        """Memoize derived data against the current version."""
        if key not in self._cache:
            self._cache[key] = factory()
        return self._cache[key]


def merge_graphs(graphs: list) -> Graph:
    """Merge graphs into one, standardizing blank nodes apart."""
    if not graphs:
        return Graph()
    if len(graphs) == 1:
        return graphs[0]
    parts = [(g.rename_bnodes() if g.has_bnodes() else g).id_triples() for g in graphs]
    return Graph.from_ids(set().union(*parts))


@dataclass
class Dataset:
    """A default graph plus IRI-named graphs."""

    default_graph: Graph = field(default_factory=Graph)
    named: dict = field(default_factory=dict)

    def graph(self, name: Optional[IRI], create: bool = False) -> Optional[Graph]:
        if name is None:
            return self.default_graph
        g = self.named.get(name)
        if g is None and create:
            g = self.named[name] = Graph()
        return g

    def add_named(self, name: IRI, graph: Graph) -> None:
        if not isinstance(name, IRI):
            raise TermError(f"graph names must be IRIs, got {name!r}")
        existing = self.named.get(name)
        self.named[name] = graph if existing is None else existing.union(graph)

    def __len__(self):
        return len(self.default_graph) + sum(len(g) for g in self.named.values())


# ---------------------------------------------------------------------------
# Blank-node isomorphism

def _refine_colors(triples: list) -> dict:
    """Color blank nodes by iterated neighbourhood hashing until stable."""
    kinds = TERMS.kinds
    bnodes = {t for s, _, o in triples for t in (s, o) if kinds[t] == KIND_BNODE}
    colors = {b: "" for b in bnodes}

    def name(tid):
        return colors[tid] if tid in colors else TERMS.term(tid).n3()

    classes = 1 if bnodes else 0
    while True:
        sigs = {b: [colors[b]] for b in bnodes}
        for s, p, o in triples:
            pn = TERMS.term(p).n3()
            if s in sigs:
                sigs[s].append(f"+{pn} {name(o)}")
            if o in sigs:
                sigs[o].append(f"-{pn} {name(s)}")
        colors = {b: hashlib.sha1("|".join(sorted(v)).encode()).hexdigest() for b, v in sigs.items()}
        n = len(set(colors.values()))
        if n == classes:
            return colors
        classes = n


def isomorphic(g1: Graph, g2: Graph) -> bool:
    """Graph equality up to blank-node renaming."""
    if len(g1) != len(g2):
        return False
    if not g1.has_bnodes() and not g2.has_bnodes():
        return g1 == g2
    t1, t2 = list(g1.id_triples()), list(g2.id_triples())
    c1, c2 = _refine_colors(t1), _refine_colors(t2)
    if sorted(c1.values()) != sorted(c2.values()):
        return False
    target = set(t2)
    by_color: dict = {}
    for b, c in c2.items():
        by_color.setdefault(c, []).append(b)
    order = sorted(c1, key=lambda b: (len(by_color[c1[b]]), c1[b]))
    mapping: dict = {}
    used: set = set()

    def consistent() -> bool:
        for s, p, o in t1:
            ms, mo = mapping.get(s, s if s not in c1 else None), mapping.get(o, o if o not in c1 else None)
            if ms is not None and mo is not None and (ms, p, mo) not in target:
                return False
        return True

    def search(i: int) -> bool:
        if i == len(order):
            return True
        b = order[i]
        for cand in by_color[c1[b]]:
            if cand in used:
                continue
            mapping[b] = cand
            used.add(cand)
            if consistent() and search(i + 1):
                return True
            del mapping[b]
            used.discard(cand)
        return False

    return search(0)
