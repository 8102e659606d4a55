"""Seeded random data generators for property and acceptance testing.

Everything here is deterministic for a given ``random.Random`` seed.  The
dataset generator covers all term kinds: IRIs (including non-ASCII), blank
nodes, literals with awkward lexical forms (quotes, newlines, backslashes,
control characters, wide unicode), language tags, datatypes, and quoted
triples up to a configurable nesting depth, spread over the default graph
and a bounded number of named graphs.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .model import DEFAULT_GRAPH, BlankNode, GraphName, Iri, Literal, Quad, Term, Triple
from .patterns import NaryShape
from .serializer import nquads_line
from .store import ANY_GRAPH, Dataset, QuadPattern, TriplePattern, Variable
from .vocab import XSD_DATE, XSD_DECIMAL, XSD_INTEGER

_NASTY_STRINGS = [
    "",
    "plain value",
    'with "double quotes"',
    "with 'single quotes'",
    "line\nbreak",
    "carriage\rreturn",
    "tab\tseparated",
    "back\\slash",
    "trailing space ",
    "ümlaut and ß",
    "漢字とかな",
    "emoji 🎉🜁",
    "astral \U0001d54a math",
    "control \x01 char",
    "both \"quotes\" and\nnewline \\ mix",
]

_LANGS = ["en", "de", "en-US", "gsw"]

_PRED_POOL_SIZE = 12
_IRI_POOL_SIZE = 30


@dataclass
class GenConfig:
    max_quads: int = 200
    max_quote_depth: int = 4
    max_named_graphs: int = 3
    max_blank_nodes: int = 8
    quoted_share: float = 0.25  # chance a subject/object position quotes a triple


class DataGen:
    def __init__(self, rng: random.Random, config: GenConfig | None = None):
        self.rng = rng
        self.config = config or GenConfig()
        self.iris = [Iri(f"http://gen.example/r{i}") for i in range(_IRI_POOL_SIZE)]
        self.iris.append(Iri("http://gen.example/ünïcode/päth"))
        self.predicates = [Iri(f"http://gen.example/p{i}") for i in range(_PRED_POOL_SIZE)]
        self.blanks = [BlankNode(f"n{i}") for i in range(self.config.max_blank_nodes)]
        self.graphs: list[GraphName] = [
            Iri(f"http://gen.example/graph{i}") for i in range(self.config.max_named_graphs)
        ]
        if self.graphs:
            self.graphs[-1] = BlankNode("gname")

    def literal(self) -> Literal:
        rng = self.rng
        choice = rng.random()
        if choice < 0.5:
            s = rng.choice(_NASTY_STRINGS)
            if rng.random() < 0.3:
                return Literal(s, language=rng.choice(_LANGS))
            return Literal(s)
        if choice < 0.7:
            return Literal(str(rng.randint(-999, 999)), XSD_INTEGER)
        if choice < 0.8:
            return Literal(f"{rng.randint(0, 99)}.{rng.randint(0, 99):02d}", XSD_DECIMAL)
        if choice < 0.9:
            return Literal(f"{rng.randint(1, 28):02d}.{rng.randint(1, 12):02d}.{rng.randint(1900, 2030)}", XSD_DATE)
        return Literal(rng.choice(_NASTY_STRINGS), Iri("http://gen.example/datatype"))

    def node(self) -> Term:
        if self.blanks and self.rng.random() < 0.25:
            return self.rng.choice(self.blanks)
        return self.rng.choice(self.iris)

    def term(self, depth_budget: int, allow_literal: bool) -> Term:
        if depth_budget > 0 and self.rng.random() < self.config.quoted_share:
            return self.triple(depth_budget - 1)
        if allow_literal and self.rng.random() < 0.4:
            return self.literal()
        return self.node()

    def triple(self, depth_budget: int | None = None) -> Triple:
        if depth_budget is None:
            depth_budget = self.rng.randint(0, self.config.max_quote_depth - 1)
        return Triple(
            self.term(depth_budget, allow_literal=False),
            self.rng.choice(self.predicates),
            self.term(depth_budget, allow_literal=True),
        )

    def graph(self) -> GraphName:
        if self.graphs and self.rng.random() < 0.35:
            return self.rng.choice(self.graphs)
        return DEFAULT_GRAPH

    def dataset(self, size: int | None = None) -> Dataset:
        if size is None:
            size = self.rng.randint(0, self.config.max_quads)
        ds = Dataset()
        for _ in range(size):
            ds.add(Quad(self.triple(), self.graph()))
        return ds

    # ------------------------------------------------------------------
    # patterns for the match oracle

    def pattern(self, ds: Dataset) -> QuadPattern:
        """A quad pattern, usually abstracted from an existing quad so that
        matches are likely; variables may land inside quoted triples."""
        rng = self.rng
        quads = list(ds)
        if not quads or rng.random() < 0.15:
            return QuadPattern(Variable("s"), Variable("p"), Variable("o"), ANY_GRAPH)
        q = rng.choice(quads)
        counter = [0]

        def abstract_term(t: Term, allow_descend: bool):
            if rng.random() < 0.4:
                counter[0] += 1
                return Variable(f"v{counter[0]}")
            if isinstance(t, Triple) and allow_descend and rng.random() < 0.8:
                return TriplePattern(
                    abstract_term(t.subject, allow_descend),
                    abstract_term(t.predicate, allow_descend),
                    abstract_term(t.object, allow_descend),
                )
            return t

        s = abstract_term(q.triple.subject, allow_descend=True)
        p = abstract_term(q.triple.predicate, allow_descend=False)
        o = abstract_term(q.triple.object, allow_descend=True)
        roll = rng.random()
        if roll < 0.4:
            g = ANY_GRAPH
        elif roll < 0.7:
            g = q.graph
        else:
            g = Variable("g")
        return QuadPattern(s, p, o, g)

    # ------------------------------------------------------------------
    # n-ary normal form for the lift/lower inverse property

    def nary_dataset(self, shape: NaryShape, n_records: int, n_filler: int) -> Dataset:
        """A dataset in n-ary normal form under the shape: every record has
        one host link, one topic, at least one further statement (its type;
        a bare record would be erased by lifting), follows the mint rule,
        and the filler avoids the shape predicates and the record
        namespace."""
        rng = self.rng
        ds = Dataset()
        ann_preds = [Iri(f"http://gen.example/ann{i}") for i in range(4)]
        for i in range(n_records):
            host = Iri(f"http://gen.example/host{rng.randint(0, max(n_records // 2, 1))}")
            target = Iri(f"http://gen.example/target{i}")
            record = Iri(target.value + shape.mint_suffix)
            ds.add(Quad(Triple(host, shape.link_pred, record)))
            ds.add(Quad(Triple(record, shape.topic_pred, target)))
            ds.add(Quad(Triple(record, Iri("http://www.w3.org/1999/02/22-rdf-syntax-ns#type"), shape.record_class)))
            for j in range(rng.randint(0, 3)):
                ds.add(Quad(Triple(record, rng.choice(ann_preds), self.literal())))
        filler_preds = [Iri(f"http://gen.example/fp{i}") for i in range(4)]
        for _ in range(n_filler):
            s = Iri(f"http://gen.example/plain{rng.randint(0, 20)}")
            o: Term = self.literal() if rng.random() < 0.5 else Iri(f"http://gen.example/plain{rng.randint(0, 20)}")
            ds.add(Quad(Triple(s, rng.choice(filler_preds), o)))
        return ds


def random_nquads_text(rng: random.Random, n_quads: int) -> str:
    """A large N-Quads-star document for throughput measurements: mostly
    plain statements with a sprinkle of quoted triples, literals, blank
    nodes, and named graphs."""
    iris = [f"<http://bench.example/node{i}>" for i in range(1000)]
    preds = [f"<http://bench.example/p{i}>" for i in range(50)]
    graphs = ["", " <http://bench.example/g1>", " <http://bench.example/g2>"]
    lines = []
    for i in range(n_quads):
        s = rng.choice(iris)
        p = rng.choice(preds)
        roll = rng.random()
        if roll < 0.55:
            o = rng.choice(iris)
        elif roll < 0.8:
            o = f'"value {i}"'
        elif roll < 0.9:
            o = f'"{rng.randint(0, 10 ** 6)}"^^<http://www.w3.org/2001/XMLSchema#integer>'
        elif roll < 0.95:
            o = f"_:b{rng.randint(0, 7)}"
        else:
            o = f"<< {rng.choice(iris)} {rng.choice(preds)} {rng.choice(iris)} >>"
        g = rng.choice(graphs)
        lines.append(f"{s} {p} {o}{g} .")
    return "\n".join(lines) + "\n"
