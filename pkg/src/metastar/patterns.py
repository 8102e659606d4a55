"""Meta-level modeling operations over datasets.

Three families of dataset-to-dataset transformations, all pure (the input
dataset is never mutated):

* provenance wrapping: move statements about chosen subjects into a named
  graph and describe that graph with provenance statements;
* statement annotation: attach data to a quoted form of an existing triple
  without touching any asserted statement, including ``replaceSubjectBy``
  directives and their ``replaced`` lineage;
* n-ary record folding: ``lift`` collapses record entities into annotations
  on a direct statement, ``lower`` expands them back, minting the record IRI
  from the target IRI.  The two are inverses on datasets in the respective
  normal forms.

``detect_meta`` reports whether a dataset carries a meta-level at all, by
counting quads with quoted subjects or objects and named graphs.

All operations work on the default graph unless a graph scope is given.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .model import (
    DEFAULT_GRAPH,
    BlankNode,
    DefaultGraph,
    GraphName,
    Iri,
    Quad,
    Term,
    Triple,
)
from .serializer import nquads_line, nquads_term
from .store import Dataset, graph_key, term_key
from .vocab import REPLACE_SUBJECT_BY, REPLACED


class PatternError(ValueError):
    """A transformation could not be applied to this dataset."""


class GraphNameCollision(PatternError):
    """The target graph of a provenance wrap already holds statements."""


class MintCollision(PatternError):
    """A minted record IRI is already taken, or two foldings mint the same
    IRI.  Renaming silently would break the lift/lower inverse, so this is an
    error."""


class MalformedRecord(PatternError):
    """A record entity does not have exactly one topic link."""


def _graph_json(g: GraphName) -> str:
    return "default" if isinstance(g, DefaultGraph) else nquads_term(g)


# ---------------------------------------------------------------------------
# Detection


@dataclass
class MetaReport:
    subject_quoted_count: int
    object_quoted_count: int
    named_graph_count: int
    graphs_with_meta: list[GraphName]
    has_meta_level: bool

    def to_json(self) -> dict:
        return {
            "subjectQuotedCount": self.subject_quoted_count,
            "objectQuotedCount": self.object_quoted_count,
            "namedGraphCount": self.named_graph_count,
            "graphsWithMeta": [_graph_json(g) for g in self.graphs_with_meta],
            "hasMetaLevel": self.has_meta_level,
        }


def detect_meta(ds: Dataset) -> MetaReport:
    """Check whether a meta-level is present: quads whose subject or object
    is a quoted triple, and named graphs.  ``graphs_with_meta`` lists graph
    names that are themselves the subject of a default-graph statement."""
    subject_quoted = 0
    object_quoted = 0
    names: dict[GraphName, None] = {}
    default_subjects: set[Term] = set()
    for q in ds:
        if isinstance(q.triple.subject, Triple):
            subject_quoted += 1
        if isinstance(q.triple.object, Triple):
            object_quoted += 1
        if isinstance(q.graph, DefaultGraph):
            default_subjects.add(q.triple.subject)
        else:
            names.setdefault(q.graph, None)
    described = [g for g in names if g in default_subjects]
    described.sort(key=graph_key)
    return MetaReport(
        subject_quoted_count=subject_quoted,
        object_quoted_count=object_quoted,
        named_graph_count=len(names),
        graphs_with_meta=described,
        has_meta_level=subject_quoted + object_quoted > 0 or len(names) > 0,
    )


# ---------------------------------------------------------------------------
# Provenance wrapping


@dataclass
class WrapReport:
    moved: list[Quad]
    vacuous: bool  # no statement matched the subject set

    def to_json(self) -> dict:
        return {"moved": [nquads_line(q) for q in self.moved], "vacuous": self.vacuous}


def wrap_provenance(
    ds: Dataset,
    subjects: Iterable[Term],
    graph: GraphName,
    prov: Sequence[tuple[Iri, Term]],
    exclude_predicates: Iterable[Iri] = (),
) -> tuple[Dataset, WrapReport]:
    """Move every default-graph statement about the given subjects into
    ``graph`` and describe the graph with the ``prov`` pairs.

    Statements whose predicate is in ``exclude_predicates`` stay where they
    are.  Raises :class:`GraphNameCollision` if the target graph already
    holds statements.  The statement count about moved subjects is conserved:
    the moved quads keep their triples, only the graph changes, and exactly
    ``len(prov)`` new default-graph quads about the graph name are added.
    """
    subjects = set(subjects)
    if not subjects:
        raise PatternError("the subject set must not be empty")
    if not isinstance(graph, (Iri, BlankNode)):
        raise PatternError("the target graph must be named by an IRI or blank node")
    if any(q.graph == graph for q in ds):
        raise GraphNameCollision(f"graph {nquads_term(graph)} already holds statements")
    excluded = set(exclude_predicates)
    out = Dataset()
    moved: list[Quad] = []
    for q in ds:
        if (
            isinstance(q.graph, DefaultGraph)
            and q.triple.subject in subjects
            and q.triple.predicate not in excluded
        ):
            new = Quad(q.triple, graph)
            out.add(new)
            moved.append(new)
        else:
            out.add(q)
    for p, o in prov:
        out.add(Quad(Triple(graph, p, o), DEFAULT_GRAPH))
    return out, WrapReport(moved=moved, vacuous=not moved)


# ---------------------------------------------------------------------------
# Statement annotation and subject replacement


def annotate(
    ds: Dataset,
    target: Triple,
    annotations: Sequence[tuple[Iri, Term]],
    assert_target: bool = True,
) -> Dataset:
    """Attach annotation statements to the quoted form of ``target`` without
    touching any existing statement; the input is a subset of the output."""
    out = ds.copy()
    if assert_target:
        out.add(Quad(target, DEFAULT_GRAPH))
    for p, o in annotations:
        out.add(Quad(Triple(target, p, o), DEFAULT_GRAPH))
    return out


@dataclass
class ReplacementReport:
    applied: list[tuple[Quad, Quad]]  # (removed old quad, added new quad)
    conflicts: list[Triple]  # quoted triples with more than one target
    lineage: list[tuple[Triple, Triple]]  # (replacing, replaced)
    unmatched: list[Triple]  # directives whose target was not asserted

    def to_json(self) -> dict:
        return {
            "applied": [
                {"old": nquads_line(old), "new": nquads_line(new)} for old, new in self.applied
            ],
            "conflicts": [nquads_term(t) for t in self.conflicts],
            "lineage": [
                {"replacing": nquads_term(a), "replaced": nquads_term(b)}
                for a, b in self.lineage
            ],
            "unmatched": [nquads_term(t) for t in self.unmatched],
        }


def apply_subject_replacements(
    ds: Dataset, graph: GraphName = DEFAULT_GRAPH
) -> tuple[Dataset, ReplacementReport]:
    """Execute every ``ex:replaceSubjectBy`` directive in the scope graph.

    For a directive ``<< s p o >> ex:replaceSubjectBy t``: when ``(s, p, o)``
    is asserted it is replaced by ``(t, p, o)`` and a lineage statement
    ``<< t p o >> ex:replaced << s p o >>`` is recorded; the directive itself
    is always consumed.  Directives quoting an unasserted triple succeed
    vacuously.  If one quoted triple has several distinct replacement targets
    (or a target that cannot be a subject), nothing is applied and the
    conflicts are reported.  Applying the result a second time is a no-op.
    """
    directives: dict[Triple, list[tuple[Term, Quad]]] = {}
    for q in ds:
        if (
            q.graph == graph
            and q.triple.predicate == REPLACE_SUBJECT_BY
            and isinstance(q.triple.subject, Triple)
        ):
            directives.setdefault(q.triple.subject, []).append((q.triple.object, q))
    report = ReplacementReport(applied=[], conflicts=[], lineage=[], unmatched=[])
    if not directives:
        return ds.copy(), report
    for quoted, targets in directives.items():
        distinct = {t for t, _ in targets}
        if len(distinct) > 1 or any(not isinstance(t, (Iri, BlankNode)) for t in distinct):
            report.conflicts.append(quoted)
    if report.conflicts:
        return ds.copy(), report

    out = ds.copy()
    for quoted, targets in directives.items():
        target = targets[0][0]
        for _, directive_quad in targets:
            out.discard(directive_quad)
        old_quad = Quad(quoted, graph)
        if old_quad in out:
            new_triple = Triple(target, quoted.predicate, quoted.object)
            out.discard(old_quad)
            out.add(Quad(new_triple, graph))
            out.add(Quad(Triple(new_triple, REPLACED, quoted), graph))
            report.applied.append((old_quad, Quad(new_triple, graph)))
            report.lineage.append((new_triple, quoted))
        else:
            report.unmatched.append(quoted)
    return out, report


@dataclass
class LineageReport:
    chains: list[list[Triple]]  # newest first
    cycles: list[list[Triple]]

    def to_json(self) -> dict:
        return {
            "chains": [[nquads_term(t) for t in chain] for chain in self.chains],
            "cycles": [[nquads_term(t) for t in cycle] for cycle in self.cycles],
        }


def replacement_lineage(ds: Dataset, graph: GraphName = DEFAULT_GRAPH) -> LineageReport:
    """Walk ``ex:replaced`` statements into maximal newest-to-oldest chains.

    Cycles are reported separately and never followed.
    """
    edges: dict[Triple, list[Triple]] = {}
    olds: set[Triple] = set()
    for q in ds:
        if (
            q.graph == graph
            and q.triple.predicate == REPLACED
            and isinstance(q.triple.subject, Triple)
            and isinstance(q.triple.object, Triple)
        ):
            edges.setdefault(q.triple.subject, []).append(q.triple.object)
            olds.add(q.triple.object)
    for successors in edges.values():
        successors.sort(key=term_key)

    heads = sorted((n for n in edges if n not in olds), key=term_key)
    chains: list[list[Triple]] = []

    def walk(node: Triple, path: list[Triple]) -> None:
        successors = edges.get(node)
        if not successors:
            chains.append(list(path))
            return
        extended = False
        for nxt in successors:
            if nxt in path:
                continue  # never follow a cycle
            path.append(nxt)
            walk(nxt, path)
            path.pop()
            extended = True
        if not extended:
            chains.append(list(path))

    for head in heads:
        walk(head, [head])

    # a node is cyclic when it can reach itself again; report each cycle once
    cycles: list[list[Triple]] = []
    in_cycle: set[Triple] = set()
    for start in sorted(edges, key=term_key):
        if start in in_cycle:
            continue
        stack = [(start, [start])]
        found: Optional[list[Triple]] = None
        while stack and found is None:
            node, path = stack.pop()
            for nxt in edges.get(node, ()):
                if nxt == start:
                    found = path
                    break
                if nxt not in path:
                    stack.append((nxt, path + [nxt]))
        if found is not None:
            cycles.append(found)
            in_cycle.update(found)
    return LineageReport(chains=chains, cycles=cycles)


# ---------------------------------------------------------------------------
# N-ary record folding


@dataclass(frozen=True)
class NaryShape:
    """Describes an n-ary record class: the host links to the record with
    ``link_pred``, the record points at the target with ``topic_pred``, and
    the meta-level form states ``host star_pred target`` directly.  Record
    IRIs are minted as ``str(target) + mint_suffix``."""

    record_class: Iri
    link_pred: Iri
    topic_pred: Iri
    star_pred: Iri
    mint_suffix: str = "/record"

    def __post_init__(self) -> None:
        values = [self.record_class, self.link_pred, self.topic_pred, self.star_pred]
        if len(set(values)) != 4:
            raise PatternError("shape predicates must be pairwise distinct")

    @classmethod
    def from_json(cls, data: dict, pm=None) -> "NaryShape":
        def to_iri(value: str) -> Iri:
            if value.startswith("<") and value.endswith(">"):
                return Iri(value[1:-1])
            # a bound prefix wins over reading the name as scheme:rest;
            # use the <...> form to force a verbatim IRI
            prefix, sep, _ = value.partition(":")
            if sep and pm is not None and prefix in pm:
                return pm.expand(value)
            return Iri(value)

        return cls(
            record_class=to_iri(data["recordClass"]),
            link_pred=to_iri(data["linkPred"]),
            topic_pred=to_iri(data["topicPred"]),
            star_pred=to_iri(data["starPred"]),
            mint_suffix=data.get("mintSuffix", "/record"),
        )

    def to_json(self) -> dict:
        return {
            "recordClass": self.record_class.value,
            "linkPred": self.link_pred.value,
            "topicPred": self.topic_pred.value,
            "starPred": self.star_pred.value,
            "mintSuffix": self.mint_suffix,
        }


def _terms_of(t: Term):
    yield t
    if isinstance(t, Triple):
        yield from _terms_of(t.subject)
        yield from _terms_of(t.predicate)
        yield from _terms_of(t.object)


def _all_terms(ds: Dataset):
    for q in ds:
        yield from _terms_of(q.triple.subject)
        yield from _terms_of(q.triple.predicate)
        yield from _terms_of(q.triple.object)
        if not isinstance(q.graph, DefaultGraph):
            yield q.graph


def lower_star_to_nary(ds: Dataset, shape: NaryShape, graph: GraphName = DEFAULT_GRAPH) -> Dataset:
    """Expand annotated ``host star_pred target`` statements back into n-ary
    records with minted IRIs.

    For every quoted triple ``K = << h star_pred t >>`` used as the subject
    of at least one scope-graph quad: a record IRI ``r`` is minted from the
    target, ``(h, link_pred, r)`` and ``(r, topic_pred, t)`` are emitted, the
    annotations of ``K`` move onto ``r``, and the asserted ``(h, star_pred,
    t)`` disappears.  Raises :class:`MintCollision` when a minted IRI is
    already in use or two foldings mint the same IRI.
    """
    quoted: dict[Triple, None] = {}
    for q in ds:
        s = q.triple.subject
        if q.graph == graph and isinstance(s, Triple) and s.predicate == shape.star_pred:
            quoted.setdefault(s, None)
    if not quoted:
        return ds.copy()

    mints: dict[Triple, Iri] = {}
    for k in quoted:
        target = k.object
        if not isinstance(target, Iri):
            raise MintCollision(
                f"cannot mint a record IRI from non-IRI target {nquads_term(target)}"
            )
        minted = Iri(target.value + shape.mint_suffix)
        if minted in mints.values():
            raise MintCollision(f"two foldings mint the same IRI {nquads_term(minted)}")
        mints[k] = minted
    taken = set(mints.values())
    for term in _all_terms(ds):
        if term in taken:
            raise MintCollision(f"minted IRI {nquads_term(term)} already occurs in the dataset")

    asserted_forms = {Quad(k, graph) for k in quoted}
    out = Dataset()
    for q in ds:
        if q.graph == graph and isinstance(q.triple.subject, Triple) and q.triple.subject in mints:
            continue  # annotation quad, re-emitted on the record below
        if q in asserted_forms:
            continue
        out.add(q)
    for k, record in mints.items():
        out.add(Quad(Triple(k.subject, shape.link_pred, record), graph))
        out.add(Quad(Triple(record, shape.topic_pred, k.object), graph))
        for q in ds:
            if q.graph == graph and q.triple.subject == k:
                out.add(Quad(Triple(record, q.triple.predicate, q.triple.object), graph))
    return out


def lift_nary_to_star(ds: Dataset, shape: NaryShape, graph: GraphName = DEFAULT_GRAPH) -> Dataset:
    """Fold n-ary records into annotations on a direct statement.

    For every pair ``(h, link_pred, r)`` and ``(r, topic_pred, t)``: assert
    ``(h, star_pred, t)`` and move every other statement about ``r`` onto the
    quoted form ``<< h star_pred t >>``; the record entity and its statements
    disappear.  Raises :class:`MalformedRecord` when a record does not have
    exactly one topic statement.
    """
    links: list[tuple[Term, Term]] = []
    records: dict[Term, None] = {}
    for q in ds:
        if q.graph == graph and q.triple.predicate == shape.link_pred:
            links.append((q.triple.subject, q.triple.object))
            records.setdefault(q.triple.object, None)
    if not links:
        return ds.copy()

    topics: dict[Term, Term] = {}
    annotations: dict[Term, list[tuple[Iri, Term]]] = {r: [] for r in records}
    for r in records:
        found = [
            q.triple.object
            for q in ds
            if q.graph == graph and q.triple.subject == r and q.triple.predicate == shape.topic_pred
        ]
        if len(found) != 1:
            raise MalformedRecord(
                f"record {nquads_term(r)} has {len(found)} topic statements, expected exactly 1"
            )
        topics[r] = found[0]
    for q in ds:
        if q.graph == graph and q.triple.subject in annotations:
            if q.triple.predicate != shape.topic_pred:
                annotations[q.triple.subject].append((q.triple.predicate, q.triple.object))

    out = Dataset()
    for q in ds:
        if q.graph == graph:
            if q.triple.predicate == shape.link_pred and q.triple.object in records:
                continue
            if q.triple.subject in records:
                continue
        out.add(q)
    for host, record in links:
        star = Triple(host, shape.star_pred, topics[record])
        out.add(Quad(star, graph))
        for p, o in annotations[record]:
            out.add(Quad(Triple(star, p, o), graph))
    return out
