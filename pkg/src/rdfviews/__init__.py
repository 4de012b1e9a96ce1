"""Embeddable RDF store with views defined as named CONSTRUCT queries."""

from .algebra import (
    ERROR,
    EvalContext,
    QueryError,
    QueryTimeout,
    SelectResult,
    construct_instantiate,
    eval_filter_expr,
    eval_pattern,
    eval_query,
)
from .entailment import entailed_bgp_match, rho_closure
from .graph import Dataset, Graph, isomorphic
from .lexer import ParseError
from .ntriples import parse_ntriples, serialize_ntriples
from .repository import RepoConfig, Repository, RepositoryError
from .schema import SchemaSummary, build_summary, extract_rdfs_from_owl, to_dot
from .sparql import parse_query, parse_view_def, serialize_query
from .terms import IRI, BNode, Literal, TermError, Triple
from .trig import parse_trig, serialize_trig
from .views import StratificationError, ViewDef, ViewError, ViewRegistry

__version__ = "0.1.0"

__all__ = [
    "BNode",
    "Dataset",
    "ERROR",
    "EvalContext",
    "Graph",
    "IRI",
    "Literal",
    "ParseError",
    "QueryError",
    "QueryTimeout",
    "RepoConfig",
    "Repository",
    "RepositoryError",
    "SchemaSummary",
    "SelectResult",
    "StratificationError",
    "TermError",
    "Triple",
    "ViewDef",
    "ViewError",
    "ViewRegistry",
    "build_summary",
    "construct_instantiate",
    "entailed_bgp_match",
    "eval_filter_expr",
    "eval_pattern",
    "eval_query",
    "extract_rdfs_from_owl",
    "isomorphic",
    "parse_ntriples",
    "parse_query",
    "parse_trig",
    "parse_view_def",
    "rho_closure",
    "serialize_ntriples",
    "serialize_query",
    "serialize_trig",
    "to_dot",
]
