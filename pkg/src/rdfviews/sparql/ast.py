"""Query AST.

All nodes are frozen dataclasses holding tuples, so two ASTs compare equal
exactly when they are structurally identical.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from ..terms import IRI, BNode, Literal, Term


@dataclass(frozen=True, slots=True)
class Var:
    name: str

    def __str__(self):
        return "?" + self.name


PatternTerm = Union[Term, Var]


@dataclass(frozen=True, slots=True)
class TriplePattern:
    subject: PatternTerm
    predicate: PatternTerm
    object: PatternTerm

    def __iter__(self):
        return iter((self.subject, self.predicate, self.object))

    def variables(self) -> set:
        names = set()
        for t in self:
            if isinstance(t, Var):
                names.add(t.name)
        return names


# -- filter expressions ------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Const:
    term: Term


@dataclass(frozen=True, slots=True)
class Compare:
    op: str  # one of = != < > <= >=
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True, slots=True)
class And:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True, slots=True)
class Or:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True, slots=True)
class Not:
    arg: "Expr"


@dataclass(frozen=True, slots=True)
class Bound:
    var: Var


@dataclass(frozen=True, slots=True)
class IsIri:
    arg: "Expr"


@dataclass(frozen=True, slots=True)
class Regex:
    arg: "Expr"
    pattern: str
    flags: str = ""


@dataclass(frozen=True, slots=True)
class Str:
    arg: "Expr"


Expr = Union[Var, Const, Compare, And, Or, Not, Bound, IsIri, Regex, Str]

COMPARE_OPS = ("=", "!=", "<", ">", "<=", ">=")


# -- graph patterns ----------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Bgp:
    triples: tuple


@dataclass(frozen=True, slots=True)
class Group:
    members: tuple


@dataclass(frozen=True, slots=True)
class Optional_:
    pattern: "GraphPattern"


@dataclass(frozen=True, slots=True)
class Union_:
    left: "GraphPattern"
    right: "GraphPattern"


@dataclass(frozen=True, slots=True)
class GraphAt:
    name: Union[IRI, Var]
    pattern: "GraphPattern"


@dataclass(frozen=True, slots=True)
class Filtered:
    pattern: "GraphPattern"
    expr: Expr


GraphPattern = Union[Bgp, Group, Optional_, Union_, GraphAt, Filtered]


# -- queries -----------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Select:
    variables: Optional[tuple]  # None means SELECT *
    distinct: bool = False


@dataclass(frozen=True, slots=True)
class Construct:
    template: tuple  # of TriplePattern


@dataclass(frozen=True, slots=True)
class Ask:
    pass


@dataclass(frozen=True, slots=True)
class From:
    iri: IRI


@dataclass(frozen=True, slots=True)
class FromNamed:
    iri: IRI


@dataclass(frozen=True, slots=True)
class FromInline:
    query: "Query"


@dataclass(frozen=True, slots=True)
class FromNamedInline:
    iri: IRI
    query: "Query"


DatasetClause = Union[From, FromNamed, FromInline, FromNamedInline]


@dataclass(frozen=True, slots=True)
class OrderCondition:
    expr: Expr
    descending: bool = False


@dataclass(frozen=True, slots=True)
class Prologue:
    base: Optional[str] = None
    prefixes: tuple = ()  # ((prefix, namespace), ...) in declaration order


@dataclass(frozen=True, slots=True)
class Query:
    form: Union[Select, Construct, Ask]
    pattern: GraphPattern
    dataset: tuple = ()
    prologue: Prologue = field(default_factory=Prologue)
    order_by: tuple = ()
    limit: Optional[int] = None
    offset: Optional[int] = None

    @property
    def is_construct(self) -> bool:
        return isinstance(self.form, Construct)


# -- traversal helpers -------------------------------------------------------


def pattern_variables(p: GraphPattern) -> list:
    """Variables of a pattern in first-occurrence order (no blank nodes)."""
    seen: dict = {}

    def visit(node):
        if isinstance(node, Bgp):
            for tp in node.triples:
                for t in tp:
                    if isinstance(t, Var):
                        seen.setdefault(t.name, None)
        elif isinstance(node, Group):
            for m in node.members:
                visit(m)
        elif isinstance(node, (Optional_, Filtered)):
            visit(node.pattern)
        elif isinstance(node, Union_):
            visit(node.left)
            visit(node.right)
        elif isinstance(node, GraphAt):
            if isinstance(node.name, Var):
                seen.setdefault(node.name.name, None)
            visit(node.pattern)

    visit(p)
    return list(seen)


def expr_contains(e: Expr, kinds) -> bool:
    if isinstance(e, kinds):
        return True
    if isinstance(e, (And, Or)):
        return expr_contains(e.left, kinds) or expr_contains(e.right, kinds)
    if isinstance(e, Compare):
        return expr_contains(e.left, kinds) or expr_contains(e.right, kinds)
    if isinstance(e, (Not, IsIri, Str, Regex)):
        return expr_contains(e.arg, kinds)
    return False


def has_negated_bound(e: Expr, negated: bool = False) -> bool:
    """True when a BOUND test occurs under an odd number of negations."""
    if isinstance(e, Bound):
        return negated
    if isinstance(e, Not):
        return has_negated_bound(e.arg, not negated)
    if isinstance(e, (And, Or, Compare)):
        return has_negated_bound(e.left, negated) or has_negated_bound(e.right, negated)
    if isinstance(e, (IsIri, Str, Regex)):
        return has_negated_bound(e.arg, negated)
    return False


__all__ = [
    "Var", "TriplePattern", "Const", "Compare", "And", "Or", "Not", "Bound", "IsIri",
    "Regex", "Str", "Expr", "Bgp", "Group", "Optional_", "Union_", "GraphAt", "Filtered",
    "GraphPattern", "Select", "Construct", "Ask", "From", "FromNamed", "FromInline",
    "FromNamedInline", "DatasetClause", "OrderCondition", "Prologue", "Query",
    "pattern_variables", "expr_contains", "has_negated_bound", "COMPARE_OPS",
    "IRI", "BNode", "Literal",
]
