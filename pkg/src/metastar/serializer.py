"""TriG-star and N-Quads-star output.

Canonical mode produces byte-stable text for golden tests and diffs: blank
nodes are renamed to their canonical labels, graphs are ordered by label,
statements by a total term order, and annotation syntax is never used, so
diffs stay line oriented.  Compact mode groups by subject with ``;``/``,``,
uses ``{| ... |}`` when the annotated triple is asserted in the same graph,
and keeps the original blank node labels.

Everything re-parses to a dataset isomorphic to the input; string literals
survive a round trip bytewise.  Pure functions throughout.
"""

from __future__ import annotations

from typing import Optional

from . import _chars
from .model import (
    BlankNode,
    DefaultGraph,
    GraphName,
    Iri,
    Literal,
    PrefixMap,
    Quad,
    Term,
    Triple,
)
from .store import Dataset, canonical_label_map, quad_key, relabel
from .vocab import (
    RDF_TYPE,
    XSD_BOOLEAN,
    XSD_DECIMAL,
    XSD_DOUBLE,
    XSD_INTEGER,
    XSD_STRING,
    RDF_LANG_STRING,
)

_STR_ESCAPES = {
    "\\": "\\\\",
    '"': '\\"',
    "\n": "\\n",
    "\r": "\\r",
    "\t": "\\t",
    "\b": "\\b",
    "\f": "\\f",
}


def escape_string(s: str) -> str:
    out = []
    for ch in s:
        esc = _STR_ESCAPES.get(ch)
        if esc is not None:
            out.append(esc)
        elif ch < "\x20":
            out.append(f"\\u{ord(ch):04X}")
        else:
            out.append(ch)
    return "".join(out)


def nquads_term(t: Term) -> str:
    """One term in N-Quads-star syntax (absolute IRIs, no prefixed names)."""
    if isinstance(t, Iri):
        return f"<{t.value}>"
    if isinstance(t, BlankNode):
        return f"_:{t.label}"
    if isinstance(t, Literal):
        body = f'"{escape_string(t.lexical)}"'
        if t.language is not None:
            return f"{body}@{t.language}"
        if t.datatype == XSD_STRING:
            return body
        return f"{body}^^<{t.datatype.value}>"
    return f"<< {nquads_term(t.subject)} {nquads_term(t.predicate)} {nquads_term(t.object)} >>"


def nquads_line(q: Quad) -> str:
    t = q.triple
    parts = [nquads_term(t.subject), nquads_term(t.predicate), nquads_term(t.object)]
    if not isinstance(q.graph, DefaultGraph):
        parts.append(nquads_term(q.graph))
    return " ".join(parts) + " ."


def _nquads_term_mapped(t: Term, labels: dict) -> str:
    if isinstance(t, BlankNode):
        return f"_:{labels.get(t, t.label) if labels else t.label}"
    if isinstance(t, Triple):
        return (
            f"<< {_nquads_term_mapped(t.subject, labels)} "
            f"{_nquads_term_mapped(t.predicate, labels)} "
            f"{_nquads_term_mapped(t.object, labels)} >>"
        )
    return nquads_term(t)


def serialize_nquads(ds: Dataset, canonical: bool = False) -> str:
    """One line per quad; canonical mode relabels blank nodes canonically and
    sorts the lines bytewise."""
    # render through the canonical label mapping instead of copying the
    # dataset; the term cache is valid because the mapping is fixed per call
    labels = canonical_label_map(ds) if canonical else {}
    cache: dict[Term, str] = {}

    def term(t: Term) -> str:
        s = cache.get(t)
        if s is None:
            s = _nquads_term_mapped(t, labels)
            cache[t] = s
        return s

    lines = []
    for q in ds:
        t = q.triple
        if isinstance(q.graph, DefaultGraph):
            lines.append(f"{term(t.subject)} {term(t.predicate)} {term(t.object)} .")
        else:
            lines.append(f"{term(t.subject)} {term(t.predicate)} {term(t.object)} {term(q.graph)} .")
    if canonical:
        lines.sort()
    return "\n".join(lines) + ("\n" if lines else "")


class _Shortener:
    """Greedy longest-namespace-match prefix compression; falls back to the
    angle-bracket form when the local part would need escaping."""

    def __init__(self, pm: Optional[PrefixMap]):
        namespaces: dict[str, str] = {}
        if pm is not None:
            for label, ns in pm.namespaces():
                namespaces.setdefault(ns.value, label)  # first bound label wins
        self._by_len = sorted(namespaces.items(), key=lambda kv: -len(kv[0]))

    def iri(self, iri: Iri) -> str:
        v = iri.value
        for ns, label in self._by_len:
            if v.startswith(ns):
                local = v[len(ns) :]
                if local == "" or _chars.PN_LOCAL_PLAIN_RE.match(local):
                    return f"{label}:{local}"
        return f"<{v}>"


def _bare_literal(lit: Literal) -> Optional[str]:
    # numeric/boolean shorthand, only when the lexical form is exactly a
    # valid token so it re-parses to the same literal
    if lit.datatype == XSD_INTEGER and _chars.INTEGER_RE.match(lit.lexical):
        return lit.lexical
    if lit.datatype == XSD_DECIMAL and _chars.DECIMAL_RE.match(lit.lexical):
        return lit.lexical
    if lit.datatype == XSD_DOUBLE and _chars.DOUBLE_RE.match(lit.lexical):
        return lit.lexical
    if lit.datatype == XSD_BOOLEAN and _chars.BOOLEAN_RE.match(lit.lexical):
        return lit.lexical
    return None


class _TrigWriter:
    def __init__(self, sh: _Shortener, compact: bool):
        self.sh = sh
        self.compact = compact

    def term(self, t: Term) -> str:
        if isinstance(t, Iri):
            return self.sh.iri(t)
        if isinstance(t, BlankNode):
            return f"_:{t.label}"
        if isinstance(t, Literal):
            if self.compact:
                bare = _bare_literal(t)
                if bare is not None:
                    return bare
            body = f'"{escape_string(t.lexical)}"'
            if t.language is not None:
                return f"{body}@{t.language}"
            if t.datatype == XSD_STRING:
                return body
            return f"{body}^^{self.sh.iri(t.datatype)}"
        return f"<< {self.term(t.subject)} {self.predicate(t.predicate)} {self.term(t.object)} >>"

    def predicate(self, p: Iri) -> str:
        if p == RDF_TYPE:
            return "a"
        return self.sh.iri(p)


def _compact_graph_lines(quads: list[Quad], writer: _TrigWriter, indent: str) -> list[str]:
    asserted = {q.triple for q in quads}
    annotations: dict[Triple, list[tuple[Iri, Term]]] = {}
    rest: list[Quad] = []
    for q in quads:
        s = q.triple.subject
        if isinstance(s, Triple) and s in asserted:
            annotations.setdefault(s, []).append((q.triple.predicate, q.triple.object))
        else:
            rest.append(q)

    def object_text(triple: Triple) -> str:
        text = writer.term(triple.object)
        ann = annotations.get(triple)
        if ann:
            pairs = " ; ".join(
                f"{writer.predicate(p)} {object_text(Triple(triple, p, o))}" for p, o in ann
            )
            text += " {| " + pairs + " |}"
        return text

    groups: dict[Term, dict[Iri, list[Term]]] = {}
    for q in rest:
        groups.setdefault(q.triple.subject, {}).setdefault(q.triple.predicate, []).append(
            q.triple.object
        )

    lines = []
    for subject, by_pred in groups.items():
        pred_parts = []
        for p, objects in by_pred.items():
            rendered = ", ".join(object_text(Triple(subject, p, o)) for o in objects)
            pred_parts.append(f"{writer.predicate(p)} {rendered}")
        head = writer.term(subject)
        if len(pred_parts) == 1:
            lines.append(f"{indent}{head} {pred_parts[0]} .")
        else:
            joiner = f" ;\n{indent}    "
            lines.append(f"{indent}{head} {joiner.join(pred_parts)} .")
    return lines


def serialize_trig(ds: Dataset, pm: Optional[PrefixMap] = None, canonical: bool = False) -> str:
    """Serialize to TriG-star.

    The output re-parses (with its own prefix directives) to a dataset
    isomorphic to the input.  An empty dataset yields only the prefix
    directives, or the empty string when the prefix map is empty too.
    """
    if canonical:
        ds = relabel(ds, canonical_label_map(ds))
    sh = _Shortener(pm)
    writer = _TrigWriter(sh, compact=not canonical)

    chunks: list[str] = []
    if pm is not None:
        namespaces = pm.namespaces()
        if canonical:
            namespaces = tuple(sorted(namespaces))
        for label, ns in namespaces:
            chunks.append(f"@prefix {label}: <{ns.value}> .")

    buckets: dict[GraphName, list[Quad]] = {}
    for q in ds:
        buckets.setdefault(q.graph, []).append(q)
    graph_order = list(buckets)
    if canonical:
        from .store import graph_key

        graph_order.sort(key=graph_key)
        for quads in buckets.values():
            quads.sort(key=quad_key)
    else:
        # default graph first, then named graphs in first-use order
        graph_order.sort(key=lambda g: 0 if isinstance(g, DefaultGraph) else 1)

    for g in graph_order:
        quads = buckets[g]
        if chunks:
            chunks.append("")
        if canonical:
            body = [f"{writer.term(q.triple.subject)} {writer.predicate(q.triple.predicate)} "
                    f"{writer.term(q.triple.object)} ." for q in quads]
        else:
            body = _compact_graph_lines(quads, writer, indent="" if isinstance(g, DefaultGraph) else "  ")
        if isinstance(g, DefaultGraph):
            chunks.extend(body)
        else:
            label = f"_:{g.label}" if isinstance(g, BlankNode) else sh.iri(g)
            chunks.append(label + " {")
            chunks.extend(body)
            chunks.append("}")

    if not chunks:
        return ""
    return "\n".join(chunks) + "\n"
