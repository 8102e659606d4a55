"""Indexed quad container, quoted-triple-aware pattern matching, and dataset
isomorphism.

``Dataset`` keeps quads in insertion order with set semantics.  SPOG, POSG
and OSPG orderings are maintained lazily: they are built on the first
``match`` call and updated incrementally afterwards, so bulk loading stays
cheap.  A side index from the components of quoted triples to the quoted
terms containing them lets patterns with variables inside ``<< >>`` avoid
full scans.

Concurrency contract: any number of concurrent readers, or one writer with
exclusive access.  No internal locking is performed.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Union

from .model import (
    DEFAULT_GRAPH,
    BlankNode,
    DefaultGraph,
    GraphName,
    Iri,
    Literal,
    ModelError,
    PositionError,
    Quad,
    Term,
    Triple,
)


class NotAQuotedTriple(ModelError):
    """A component accessor was applied to a term that is not a triple."""


_VARNAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


@dataclass(frozen=True)
class Variable:
    """A query variable; distinct from every term kind."""

    name: str

    def __post_init__(self) -> None:
        if not _VARNAME.match(self.name):
            raise ModelError(f"invalid variable name: {self.name!r}")

    def __repr__(self) -> str:
        return f"Variable({self.name!r})"


@dataclass(frozen=True)
class TriplePattern:
    """A triple-shaped pattern; components may be terms, variables, or nested
    patterns.  Matches quoted triples."""

    subject: "TermPattern"
    predicate: "TermPattern"
    object: "TermPattern"


QuotedTriplePattern = TriplePattern

TermPattern = Union[Iri, BlankNode, Literal, Triple, Variable, TriplePattern]


@dataclass(frozen=True)
class AnyGraph:
    """Graph wildcard: matches every graph, including the default graph,
    without binding anything."""

    def __repr__(self) -> str:
        return "AnyGraph()"


ANY_GRAPH = AnyGraph()


@dataclass(frozen=True)
class QuadPattern:
    subject: TermPattern
    predicate: TermPattern
    object: TermPattern
    graph: Union[DefaultGraph, Iri, BlankNode, Variable, AnyGraph] = ANY_GRAPH


Binding = dict


# ---------------------------------------------------------------------------
# Term utilities


def is_quoted(t) -> bool:
    """True iff the term is a (quoted) triple."""
    return isinstance(t, Triple)


def subject_of(t: Term) -> Term:
    if not isinstance(t, Triple):
        raise NotAQuotedTriple(f"not a quoted triple: {t!r}")
    return t.subject


def predicate_of(t: Term) -> Iri:
    if not isinstance(t, Triple):
        raise NotAQuotedTriple(f"not a quoted triple: {t!r}")
    return t.predicate


def object_of(t: Term) -> Term:
    if not isinstance(t, Triple):
        raise NotAQuotedTriple(f"not a quoted triple: {t!r}")
    return t.object


def make_quoted(s: Term, p: Iri, o: Term) -> Triple:
    """Construct a quoted triple, enforcing positional rules."""
    return Triple(s, p, o)


def term_key(t: Term):
    """Total order over terms: IRIs < blank nodes < literals < quoted
    triples, each compared componentwise."""
    if isinstance(t, Iri):
        return (0, t.value)
    if isinstance(t, BlankNode):
        return (1, t.label)
    if isinstance(t, Literal):
        return (2, t.lexical, t.language or "", t.datatype.value)
    return (3, term_key(t.subject), term_key(t.predicate), term_key(t.object))


def graph_key(g: GraphName):
    if isinstance(g, DefaultGraph):
        return (0,)
    return (1, term_key(g))


def quad_key(q: Quad):
    return (
        graph_key(q.graph),
        term_key(q.triple.subject),
        term_key(q.triple.predicate),
        term_key(q.triple.object),
    )


# ---------------------------------------------------------------------------
# Indexes


def _ins3(index, a, b, c, q):
    index.setdefault(a, {}).setdefault(b, {}).setdefault(c, {})[q] = None


def _del3(index, a, b, c, q):
    d2 = index[a]
    d3 = d2[b]
    leaf = d3[c]
    del leaf[q]
    if not leaf:
        del d3[c]
        if not d3:
            del d2[b]
            if not d2:
                del index[a]


class _Indexes:
    __slots__ = ("spo", "pos", "osp", "quoted")

    def __init__(self, quads: Iterable[Quad]):
        self.spo: dict = {}
        self.pos: dict = {}
        self.osp: dict = {}
        # (slot, inner component) -> {quoted triple: occurrence count}
        self.quoted: dict = {}
        for q in quads:
            self.add(q)

    def add(self, q: Quad) -> None:
        t = q.triple
        _ins3(self.spo, t.subject, t.predicate, t.object, q)
        _ins3(self.pos, t.predicate, t.object, t.subject, q)
        _ins3(self.osp, t.object, t.subject, t.predicate, q)
        for term in (t.subject, t.object):
            if isinstance(term, Triple):
                self._bump(term, +1)

    def remove(self, q: Quad) -> None:
        t = q.triple
        _del3(self.spo, t.subject, t.predicate, t.object, q)
        _del3(self.pos, t.predicate, t.object, t.subject, q)
        _del3(self.osp, t.object, t.subject, t.predicate, q)
        for term in (t.subject, t.object):
            if isinstance(term, Triple):
                self._bump(term, -1)

    def _bump(self, quoted: Triple, delta: int) -> None:
        for slot, comp in (("s", quoted.subject), ("p", quoted.predicate), ("o", quoted.object)):
            bucket = self.quoted.setdefault((slot, comp), {})
            n = bucket.get(quoted, 0) + delta
            if n > 0:
                bucket[quoted] = n
            else:
                bucket.pop(quoted, None)
                if not bucket:
                    del self.quoted[(slot, comp)]

    def quoted_candidates(self, pat: TriplePattern) -> Optional[list]:
        """Quoted triples in the dataset whose ground components match the
        pattern's; None when the pattern has no ground component."""
        buckets = []
        for slot, comp in (("s", pat.subject), ("p", pat.predicate), ("o", pat.object)):
            if _is_ground(comp):
                buckets.append(self.quoted.get((slot, comp), {}))
        if not buckets:
            return None
        smallest = min(buckets, key=len)
        return [k for k in smallest if all(k in b for b in buckets)]


def _is_ground(p) -> bool:
    return isinstance(p, (Iri, BlankNode, Literal, Triple))


def _scan3(index, k1, k2, k3) -> Iterator[Quad]:
    if k1 is None:
        level1 = index.values()
    else:
        d = index.get(k1)
        if d is None:
            return
        level1 = (d,)
    for d2 in level1:
        if k2 is None:
            level2 = d2.values()
        else:
            d3 = d2.get(k2)
            if d3 is None:
                continue
            level2 = (d3,)
        for d3 in level2:
            if k3 is None:
                for leaf in d3.values():
                    yield from leaf
            else:
                leaf = d3.get(k3)
                if leaf is not None:
                    yield from leaf


# ---------------------------------------------------------------------------
# Dataset


class Dataset:
    """A mutable set of quads (no duplicates) preserving insertion order."""

    __slots__ = ("_quads", "_idx")

    def __init__(self, quads: Iterable[Quad] = ()):
        self._quads: dict[Quad, None] = {}
        self._idx: Optional[_Indexes] = None
        for q in quads:
            self.add(q)

    def add(self, q: Quad) -> bool:
        """Insert a quad; returns True iff it was not already present."""
        if not isinstance(q, Quad):
            raise TypeError(f"expected Quad, got {type(q).__name__}")
        if q in self._quads:
            return False
        self._quads[q] = None
        if self._idx is not None:
            self._idx.add(q)
        return True

    def discard(self, q: Quad) -> bool:
        """Remove a quad; returns True iff it was present."""
        if q not in self._quads:
            return False
        del self._quads[q]
        if self._idx is not None:
            self._idx.remove(q)
        return True

    def __contains__(self, q: Quad) -> bool:
        return q in self._quads

    def __len__(self) -> int:
        return len(self._quads)

    def __iter__(self) -> Iterator[Quad]:
        return iter(self._quads)

    def __bool__(self) -> bool:
        return bool(self._quads)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Dataset):
            return NotImplemented
        return self._quads.keys() == other._quads.keys()

    __hash__ = None  # mutable container

    def __repr__(self) -> str:
        return f"<Dataset of {len(self._quads)} quads>"

    def copy(self) -> "Dataset":
        ds = Dataset()
        ds._quads = dict(self._quads)
        return ds

    def graph_names(self) -> list[GraphName]:
        """Non-default graph names, in first-use order."""
        seen: dict[GraphName, None] = {}
        for q in self._quads:
            if not isinstance(q.graph, DefaultGraph):
                seen.setdefault(q.graph, None)
        return list(seen)

    def _indexes(self) -> _Indexes:
        if self._idx is None:
            self._idx = _Indexes(self._quads)
        return self._idx

    def match(self, pattern: QuadPattern) -> list[Binding]:
        """All solutions of the pattern against this dataset.

        Unification descends into quoted-triple patterns.  A variable in the
        graph position matches named graphs only.  Solutions come back in
        index order, which is deterministic for a given insertion history.
        """
        try:
            pattern = _normalize_pattern(pattern)
        except PositionError:
            return []  # ground pattern can never be a valid triple
        out = []
        for q in self._candidates(pattern):
            b = _unify_quad(pattern, q)
            if b is not None:
                out.append(b)
        return out

    def _candidates(self, pat: QuadPattern) -> Iterable[Quad]:
        s, p, o = pat.subject, pat.predicate, pat.object
        s_ground, p_ground, o_ground = _is_ground(s), _is_ground(p), _is_ground(o)
        if not (s_ground or p_ground or o_ground):
            if not (isinstance(s, TriplePattern) or isinstance(o, TriplePattern)):
                return list(self._quads)  # nothing to index on
        idx = self._indexes()
        if s_ground:
            return _scan3(idx.spo, s, p if p_ground else None, o if o_ground else None)
        if p_ground:
            return _scan3(idx.pos, p, o if o_ground else None, None)
        if o_ground:
            return _scan3(idx.osp, o, None, None)
        if isinstance(s, TriplePattern):
            cands = idx.quoted_candidates(s)
            if cands is not None:
                return self._quoted_route(idx.spo, cands)
        if isinstance(o, TriplePattern):
            cands = idx.quoted_candidates(o)
            if cands is not None:
                return self._quoted_route(idx.osp, cands)
        return list(self._quads)

    @staticmethod
    def _quoted_route(index, candidates) -> Iterator[Quad]:
        for k in candidates:
            yield from _scan3(index, k, None, None)


def insert(ds: Dataset, q: Quad) -> tuple[Dataset, bool]:
    """Functional-style insert: returns the dataset and whether q was new."""
    return ds, ds.add(q)


def match(ds: Dataset, pattern: QuadPattern) -> list[Binding]:
    return ds.match(pattern)


def _normalize_pattern(pat: QuadPattern) -> QuadPattern:
    s = _normalize_term_pattern(pat.subject)
    p = _normalize_term_pattern(pat.predicate)
    o = _normalize_term_pattern(pat.object)
    if (s, p, o) == (pat.subject, pat.predicate, pat.object):
        return pat
    return QuadPattern(s, p, o, pat.graph)


def _normalize_term_pattern(p):
    """Fold fully ground triple patterns into quoted triples so they take the
    fast index routes; raises PositionError if the ground form is invalid."""
    if isinstance(p, TriplePattern):
        s = _normalize_term_pattern(p.subject)
        pr = _normalize_term_pattern(p.predicate)
        o = _normalize_term_pattern(p.object)
        if _is_ground(s) and _is_ground(pr) and _is_ground(o):
            return Triple(s, pr, o)
        if (s, pr, o) != (p.subject, p.predicate, p.object):
            return TriplePattern(s, pr, o)
    return p


def _unify(pat, term, binding: dict) -> Optional[dict]:
    if isinstance(pat, Variable):
        bound = binding.get(pat)
        if bound is None:
            binding[pat] = term
            return binding
        return binding if bound == term else None
    if isinstance(pat, TriplePattern):
        if not isinstance(term, Triple):
            return None
        for comp, value in (
            (pat.subject, term.subject),
            (pat.predicate, term.predicate),
            (pat.object, term.object),
        ):
            if _unify(comp, value, binding) is None:
                return None
        return binding
    return binding if pat == term else None


def _unify_quad(pat: QuadPattern, q: Quad) -> Optional[dict]:
    binding: dict = {}
    t = q.triple
    for comp, value in ((pat.subject, t.subject), (pat.predicate, t.predicate), (pat.object, t.object)):
        if _unify(comp, value, binding) is None:
            return None
    g = pat.graph
    if isinstance(g, AnyGraph):
        return binding
    if isinstance(g, Variable):
        if isinstance(q.graph, DefaultGraph):
            return None
        return _unify(g, q.graph, binding)
    return binding if g == q.graph else None


# ---------------------------------------------------------------------------
# Blank node relabeling and isomorphism


def _map_term(t: Term, mapping) -> Term:
    if isinstance(t, BlankNode):
        new = mapping.get(t)
        if new is None:
            return t
        return BlankNode(new) if isinstance(new, str) else new
    if isinstance(t, Triple):
        return Triple(
            _map_term(t.subject, mapping),
            t.predicate,
            _map_term(t.object, mapping),
        )
    return t


def relabel(ds: Dataset, mapping: dict) -> Dataset:
    """A copy of the dataset with blank nodes renamed per the mapping (labels
    or BlankNode values); blanks inside quoted triples and graph names
    included.  Unmapped blanks are kept."""
    out = Dataset()
    for q in ds:
        g = q.graph
        if isinstance(g, BlankNode):
            g = _map_term(g, mapping)
        out.add(Quad(_map_term(q.triple, mapping), g))  # type: ignore[arg-type]
    return out


def _collect_blanks(t, acc: dict) -> None:
    if isinstance(t, BlankNode):
        acc.setdefault(t, None)
    elif isinstance(t, Triple):
        _collect_blanks(t.subject, acc)
        _collect_blanks(t.object, acc)


def blank_nodes(ds: Dataset) -> list[BlankNode]:
    """All blank nodes of the dataset (graph names and quoted triples
    included), in first-use order."""
    acc: dict[BlankNode, None] = {}
    for q in ds:
        _collect_blanks(q.triple.subject, acc)
        _collect_blanks(q.triple.object, acc)
        _collect_blanks(q.graph, acc)
    return list(acc)


def _sig_term(t, colors: dict, self_node=None) -> str:
    if isinstance(t, Iri):
        return "I" + t.value
    if isinstance(t, BlankNode):
        if t is self_node or t == self_node:
            return "B@"
        return "B" + colors[t]
    if isinstance(t, Literal):
        return f"L{t.lexical}{t.language or ''}{t.datatype.value}"
    return (
        "T("
        + _sig_term(t.subject, colors, self_node)
        + ""
        + _sig_term(t.predicate, colors, self_node)
        + ""
        + _sig_term(t.object, colors, self_node)
        + ")"
    )


def _sig_quad(q: Quad, colors: dict, self_node=None) -> str:
    g = "G" if isinstance(q.graph, DefaultGraph) else _sig_term(q.graph, colors, self_node)
    return "".join(
        (
            _sig_term(q.triple.subject, colors, self_node),
            _sig_term(q.triple.predicate, colors, self_node),
            _sig_term(q.triple.object, colors, self_node),
            g,
        )
    )


def _digest(s: str) -> str:
    return hashlib.md5(s.encode("utf-8")).hexdigest()


def _partition(colors: dict) -> frozenset:
    groups: dict[str, list] = {}
    for b, c in colors.items():
        groups.setdefault(c, []).append(b)
    return frozenset(frozenset(g) for g in groups.values())


def _refine(mentions: dict, colors: dict) -> dict:
    """Iteratively refine blank node colors from the quads mentioning them
    until the partition is stable."""
    while True:
        before = _partition(colors)
        new = {}
        for b, qs in mentions.items():
            sigs = sorted(_sig_quad(q, colors, self_node=b) for q in qs)
            new[b] = _digest(colors[b] + "" + "".join(sigs))
        colors = new
        if _partition(colors) == before:
            return colors


def _mentions(ds: Dataset, blanks: list[BlankNode]) -> dict:
    per_quad = []
    for q in ds:
        acc: dict[BlankNode, None] = {}
        _collect_blanks(q.triple.subject, acc)
        _collect_blanks(q.triple.object, acc)
        _collect_blanks(q.graph, acc)
        per_quad.append((q, acc))
    out: dict[BlankNode, list] = {b: [] for b in blanks}
    for q, acc in per_quad:
        for b in acc:
            out[b].append(q)
    return out


def _force_discrete(quads: list, mentions: dict, colors: dict) -> dict:
    groups: dict[str, list] = {}
    for b, c in colors.items():
        groups.setdefault(c, []).append(b)
    shared = sorted(c for c, g in groups.items() if len(g) > 1)
    if not shared:
        return colors
    cls = groups[shared[0]]
    best_form = None
    best = None
    for b in cls:
        tweaked = dict(colors)
        tweaked[b] = _digest(tweaked[b] + "")
        tweaked = _force_discrete(quads, mentions, _refine(mentions, tweaked))
        form = sorted(_sig_quad(q, tweaked) for q in quads)
        if best_form is None or form < best_form:
            best_form, best = form, tweaked
    return best


def _canonical_colors(ds: Dataset) -> dict:
    blanks = blank_nodes(ds)
    if not blanks:
        return {}
    mentions = _mentions(ds, blanks)
    colors = _refine(mentions, {b: "" for b in blanks})
    return _force_discrete(list(ds), mentions, colors)


def canonical_form(ds: Dataset) -> tuple[str, ...]:
    """A string form of the dataset invariant under blank node renaming; two
    datasets are isomorphic iff their canonical forms are equal."""
    colors = _canonical_colors(ds)
    return tuple(sorted(_sig_quad(q, colors) for q in ds))


def isomorphic(a: Dataset, b: Dataset) -> bool:
    """True iff a bijection over blank node labels maps one dataset exactly
    onto the other (quoted triples compared recursively)."""
    if len(a) != len(b):
        return False
    return canonical_form(a) == canonical_form(b)


def _has_blank(t) -> bool:
    if isinstance(t, BlankNode):
        return True
    if isinstance(t, Triple):
        return _has_blank(t.subject) or _has_blank(t.object)
    return False


def canonical_label_map(ds: Dataset) -> dict[BlankNode, str]:
    """Canonical labels ``b0, b1, ...`` assigned in first-use order of the
    canonical quad ordering."""
    colors = _canonical_colors(ds)
    if not colors:
        return {}
    rank = {b: i for i, b in enumerate(sorted(colors, key=colors.__getitem__))}

    def tkey(t):
        if isinstance(t, BlankNode):
            return (1, rank[t])
        if isinstance(t, Triple):
            return (3, tkey(t.subject), tkey(t.predicate), tkey(t.object))
        return term_key(t)

    def qkey(q):
        g = (0,) if isinstance(q.graph, DefaultGraph) else (1, tkey(q.graph))
        return (g, tkey(q.triple.subject), tkey(q.triple.predicate), tkey(q.triple.object))

    labels: dict[BlankNode, str] = {}

    def visit(t) -> None:
        if isinstance(t, BlankNode):
            if t not in labels:
                labels[t] = f"b{len(labels)}"
        elif isinstance(t, Triple):
            visit(t.subject)
            visit(t.object)

    # only blank-bearing quads assign labels, and sorting a subsequence
    # preserves its relative order, so the rest need not be sorted
    relevant = [
        q
        for q in ds
        if _has_blank(q.triple.subject) or _has_blank(q.triple.object) or isinstance(q.graph, BlankNode)
    ]
    for q in sorted(relevant, key=qkey):
        visit(q.triple.subject)
        visit(q.triple.object)
        visit(q.graph)
    return labels


def canonicalized(ds: Dataset) -> Dataset:
    """The dataset with blank nodes renamed to their canonical labels."""
    return relabel(ds, canonical_label_map(ds))
