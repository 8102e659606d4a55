"""Immutable value types for RDF-star data.

IRIs, blank nodes, literals, triples, quads, and prefix maps.  A triple may
itself appear in the subject or object position of another triple; that is
how quoted ("RDF-star") triples are represented here.  Quoting is positional,
not a separate type, so a ``Triple`` found inside a term position *is* the
quoted triple and compares structurally.

All values are frozen dataclasses: hashable, comparable, and safe to share
across threads.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional, Union
from urllib.parse import urljoin

XSD = "http://www.w3.org/2001/XMLSchema#"
RDF = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"


class ModelError(ValueError):
    """A structurally invalid RDF value was constructed."""


class PositionError(ModelError):
    """A term was used in a position its kind does not allow."""


class UnknownPrefix(ModelError):
    """A prefixed name used a prefix that is not bound."""


_SCHEME = re.compile(r"[A-Za-z][A-Za-z0-9+.\-]*:")
# Characters that can never appear in an IRI (whitespace, controls, and the
# delimiters the angle-bracket syntax reserves).
_IRI_BAD = re.compile(r'[\x00-\x20<>"{}|^`\\]')
_BLANK_LABEL = re.compile(r"[A-Za-z0-9_]+\Z")
_LANGTAG_OK = re.compile(r"[A-Za-z]{1,8}(?:-[A-Za-z0-9]{1,8})*\Z")


@dataclass(frozen=True)
class Iri:
    """An absolute IRI."""

    value: str

    def __post_init__(self) -> None:
        v = self.value
        if not v or _IRI_BAD.search(v) or not _SCHEME.match(v):
            raise ModelError(f"not an absolute IRI: {v!r}")

    def __repr__(self) -> str:
        return f"Iri({self.value!r})"


@dataclass(frozen=True)
class BlankNode:
    """A blank node.  Labels are scoped to one dataset: the same label in two
    graphs of a dataset denotes the same node."""

    label: str

    def __post_init__(self) -> None:
        if not _BLANK_LABEL.match(self.label):
            raise ModelError(f"invalid blank node label: {self.label!r}")

    def __repr__(self) -> str:
        return f"BlankNode({self.label!r})"


IRI_STRING = Iri(XSD + "string")
IRI_LANG_STRING = Iri(RDF + "langString")
IRI_TYPE = Iri(RDF + "type")


@dataclass(frozen=True)
class Literal:
    """A literal with a lexical form, a datatype, and an optional language tag.

    Equality is lexical: ``"1"^^xsd:integer`` and ``"01"^^xsd:integer`` are
    distinct values.  No value-space canonicalization is performed, so
    whatever form a source document used survives a round trip.
    """

    lexical: str
    datatype: Optional[Iri] = None
    language: Optional[str] = None

    def __post_init__(self) -> None:
        if self.language is not None:
            if not _LANGTAG_OK.match(self.language):
                raise ModelError(f"invalid language tag: {self.language!r}")
            if self.datatype is None:
                object.__setattr__(self, "datatype", IRI_LANG_STRING)
            elif self.datatype != IRI_LANG_STRING:
                raise ModelError("language-tagged literal must use the langString datatype")
        elif self.datatype is None:
            object.__setattr__(self, "datatype", IRI_STRING)
        elif self.datatype == IRI_LANG_STRING:
            raise ModelError("langString literal requires a language tag")
        elif not isinstance(self.datatype, Iri):
            raise ModelError("datatype must be an Iri")

    def __repr__(self) -> str:
        if self.language is not None:
            return f"Literal({self.lexical!r}, language={self.language!r})"
        if self.datatype == IRI_STRING:
            return f"Literal({self.lexical!r})"
        return f"Literal({self.lexical!r}, datatype={self.datatype!r})"


@dataclass(frozen=True)
class Triple:
    """An RDF-star triple.

    Used in two roles: asserted inside a :class:`Quad`, or quoted when it
    occurs as the subject or object of another triple.  Quoting does not
    assert: a quoted triple inside a quad says nothing about whether the
    same triple is present as data.
    """

    subject: "Term"
    predicate: Iri
    object: "Term"

    def __post_init__(self) -> None:
        if isinstance(self.subject, Literal):
            raise PositionError("a literal cannot be the subject of a triple")
        if not isinstance(self.subject, (Iri, BlankNode, Triple)):
            raise PositionError(f"invalid subject term: {self.subject!r}")
        if not isinstance(self.predicate, Iri):
            raise PositionError("the predicate of a triple must be an IRI")
        if not isinstance(self.object, (Iri, BlankNode, Literal, Triple)):
            raise PositionError(f"invalid object term: {self.object!r}")


# A triple appearing in a term position is a quoted triple; the alias keeps
# call sites explicit about intent.
QuotedTriple = Triple

Term = Union[Iri, BlankNode, Literal, Triple]


@dataclass(frozen=True)
class DefaultGraph:
    """The name of the default graph."""

    def __repr__(self) -> str:
        return "DefaultGraph()"


DEFAULT_GRAPH = DefaultGraph()

GraphName = Union[DefaultGraph, Iri, BlankNode]


@dataclass(frozen=True)
class Quad:
    """An asserted triple together with the graph it belongs to."""

    triple: Triple
    graph: GraphName = DEFAULT_GRAPH

    def __post_init__(self) -> None:
        if not isinstance(self.triple, Triple):
            raise ModelError("quad must carry a Triple")
        if not isinstance(self.graph, (DefaultGraph, Iri, BlankNode)):
            raise PositionError("a graph name must be an IRI or a blank node")

    @property
    def subject(self) -> Term:
        return self.triple.subject

    @property
    def predicate(self) -> Iri:
        return self.triple.predicate

    @property
    def object(self) -> Term:
        return self.triple.object


def quad(s: Term, p: Iri, o: Term, g: GraphName = DEFAULT_GRAPH) -> Quad:
    """Shorthand for ``Quad(Triple(s, p, o), g)``."""
    return Quad(Triple(s, p, o), g)


def nesting_depth(t: Triple) -> int:
    """Depth of quoted-triple nesting: 0 when neither the subject nor the
    object is a triple, else one more than the deepest quoted component."""
    depth = 0
    if isinstance(t.subject, Triple):
        depth = nesting_depth(t.subject) + 1
    if isinstance(t.object, Triple):
        depth = max(depth, nesting_depth(t.object) + 1)
    return depth


class PrefixMap:
    """An ordered mapping from prefix labels to namespace IRIs, plus an
    optional base IRI for resolving relative references.

    Rebinding a label keeps its position but replaces the namespace (last
    definition wins).  The empty label is a valid prefix (``:local``).
    """

    __slots__ = ("_map", "base")

    def __init__(self, prefixes=None, base: Optional[Iri] = None):
        self._map: dict[str, Iri] = {}
        self.base = base
        if prefixes:
            items = prefixes.items() if isinstance(prefixes, dict) else prefixes
            for label, ns in items:
                self.bind(label, ns)

    def bind(self, label: str, namespace: Union[Iri, str]) -> None:
        if ":" in label or _IRI_BAD.search(label):
            raise ModelError(f"invalid prefix label: {label!r}")
        if isinstance(namespace, str):
            namespace = Iri(namespace)
        self._map[label] = namespace

    def expand(self, name: str) -> Iri:
        """Expand ``prefix:local`` to a full IRI."""
        prefix, sep, local = name.partition(":")
        if not sep:
            raise ModelError(f"not a prefixed name: {name!r}")
        try:
            ns = self._map[prefix]
        except KeyError:
            raise UnknownPrefix(f"unknown prefix {prefix!r}") from None
        return Iri(ns.value + local)

    def resolve(self, ref: str) -> Iri:
        """Resolve an IRI reference against the base when it is relative."""
        if _SCHEME.match(ref):
            return Iri(ref)
        if self.base is None:
            raise ModelError(f"relative IRI reference {ref!r} and no base is set")
        return Iri(urljoin(self.base.value, ref))

    def namespaces(self) -> tuple[tuple[str, Iri], ...]:
        return tuple(self._map.items())

    def __contains__(self, label: str) -> bool:
        return label in self._map

    def __len__(self) -> int:
        return len(self._map)

    def copy(self) -> "PrefixMap":
        return PrefixMap(self._map, base=self.base)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PrefixMap):
            return NotImplemented
        return self._map == other._map and self.base == other.base

    def __repr__(self) -> str:
        return f"PrefixMap({self._map!r}, base={self.base!r})"
