"""RDF-star + Named Graphs toolkit.

A dataset model with quoted triples and named graphs, a TriG-star parser and
serializers, an indexed quad store with pattern matching and isomorphism, and
meta-level modeling transformations (provenance wrapping, statement
annotation, n-ary record lift/lower).
"""

from .model import (
    DEFAULT_GRAPH,
    RDF,
    XSD,
    BlankNode,
    DefaultGraph,
    GraphName,
    Iri,
    Literal,
    ModelError,
    PositionError,
    PrefixMap,
    Quad,
    QuotedTriple,
    Term,
    Triple,
    UnknownPrefix,
    nesting_depth,
    quad,
)
from .parser import ParseError, ParseErrorKind, ParseOptions, parse, parse_nquads_star
from .patterns import (
    GraphNameCollision,
    LineageReport,
    MalformedRecord,
    MetaReport,
    MintCollision,
    NaryShape,
    PatternError,
    ReplacementReport,
    WrapReport,
    annotate,
    apply_subject_replacements,
    detect_meta,
    lift_nary_to_star,
    lower_star_to_nary,
    replacement_lineage,
    wrap_provenance,
)
from .serializer import serialize_nquads, serialize_trig
from .store import (
    ANY_GRAPH,
    AnyGraph,
    Binding,
    Dataset,
    NotAQuotedTriple,
    QuadPattern,
    QuotedTriplePattern,
    TriplePattern,
    Variable,
    blank_nodes,
    canonical_form,
    canonical_label_map,
    canonicalized,
    insert,
    is_quoted,
    isomorphic,
    make_quoted,
    match,
    object_of,
    predicate_of,
    relabel,
    subject_of,
)

__version__ = "0.1.0"

__all__ = [
    "ANY_GRAPH",
    "AnyGraph",
    "Binding",
    "BlankNode",
    "Dataset",
    "DEFAULT_GRAPH",
    "DefaultGraph",
    "GraphName",
    "GraphNameCollision",
    "Iri",
    "LineageReport",
    "Literal",
    "MalformedRecord",
    "MetaReport",
    "MintCollision",
    "ModelError",
    "NaryShape",
    "NotAQuotedTriple",
    "ParseError",
    "ParseErrorKind",
    "ParseOptions",
    "PatternError",
    "PositionError",
    "PrefixMap",
    "Quad",
    "QuadPattern",
    "QuotedTriple",
    "QuotedTriplePattern",
    "RDF",
    "ReplacementReport",
    "Term",
    "Triple",
    "TriplePattern",
    "UnknownPrefix",
    "Variable",
    "WrapReport",
    "XSD",
    "annotate",
    "apply_subject_replacements",
    "blank_nodes",
    "canonical_form",
    "canonical_label_map",
    "canonicalized",
    "detect_meta",
    "insert",
    "is_quoted",
    "isomorphic",
    "lift_nary_to_star",
    "lower_star_to_nary",
    "make_quoted",
    "match",
    "nesting_depth",
    "object_of",
    "parse",
    "parse_nquads_star",
    "predicate_of",
    "quad",
    "relabel",
    "replacement_lineage",
    "serialize_nquads",
    "serialize_trig",
    "subject_of",
    "wrap_provenance",
]
