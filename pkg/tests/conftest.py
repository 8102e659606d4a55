"""Shared fixtures and independent oracles.

The oracles here deliberately re-derive results with the dumbest possible
method (full scans, exhaustive bijection search) so the indexed and
canonicalizing implementations are checked against something that cannot
share their bugs.
"""

from __future__ import annotations

import itertools
import json
from pathlib import Path

import pytest

from metastar import (
    BlankNode,
    Dataset,
    DefaultGraph,
    Quad,
    Triple,
    parse,
)
from metastar.store import AnyGraph, TriplePattern, Variable, blank_nodes, relabel

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


@pytest.fixture(scope="session")
def corpus_manifest() -> dict:
    return json.loads((CORPUS / "manifest.json").read_text())["files"]


def corpus_text(name: str) -> str:
    return (CORPUS / name).read_text()


def load_corpus(name: str):
    return parse(corpus_text(name))


@pytest.fixture
def dcat_shape_path() -> Path:
    return CORPUS / "shapes" / "dcat.json"


# ---------------------------------------------------------------------------
# Oracles


def iso_by_exhaustive_bijection(a: Dataset, b: Dataset) -> bool:
    """Isomorphism by trying every blank node bijection; only usable for
    small datasets."""
    if len(a) != len(b):
        return False
    blanks_a = blank_nodes(a)
    blanks_b = blank_nodes(b)
    if len(blanks_a) != len(blanks_b):
        return False
    quads_b = set(b)
    for perm in itertools.permutations(blanks_b):
        mapping = dict(zip(blanks_a, perm))
        if set(relabel(a, mapping)) == quads_b:
            return True
    return False


def unify_term_oracle(pattern, term, binding) -> bool:
    """Independent unifier used by the match oracle; mutates binding."""
    if isinstance(pattern, Variable):
        if pattern in binding:
            return binding[pattern] == term
        binding[pattern] = term
        return True
    if isinstance(pattern, TriplePattern):
        if not isinstance(term, Triple):
            return False
        return (
            unify_term_oracle(pattern.subject, term.subject, binding)
            and unify_term_oracle(pattern.predicate, term.predicate, binding)
            and unify_term_oracle(pattern.object, term.object, binding)
        )
    return pattern == term


def match_oracle(ds: Dataset, pattern) -> list[dict]:
    """Pattern matching by scanning every quad."""
    results = []
    for q in ds:
        binding: dict = {}
        if not unify_term_oracle(pattern.subject, q.triple.subject, binding):
            continue
        if not unify_term_oracle(pattern.predicate, q.triple.predicate, binding):
            continue
        if not unify_term_oracle(pattern.object, q.triple.object, binding):
            continue
        g = pattern.graph
        if isinstance(g, AnyGraph):
            pass
        elif isinstance(g, Variable):
            if isinstance(q.graph, DefaultGraph):
                continue
            if not unify_term_oracle(g, q.graph, binding):
                continue
        elif g != q.graph:
            continue
        results.append(binding)
    return results


def detect_oracle(ds: Dataset) -> tuple[int, int, int, set]:
    """Meta-level counts by plain enumeration: (subject-quoted quads,
    object-quoted quads, named graph count, described graph names)."""
    sq = sum(1 for q in ds if isinstance(q.triple.subject, Triple))
    oq = sum(1 for q in ds if isinstance(q.triple.object, Triple))
    graphs = {q.graph for q in ds if not isinstance(q.graph, DefaultGraph)}
    default_subjects = {q.triple.subject for q in ds if isinstance(q.graph, DefaultGraph)}
    described = {g for g in graphs if g in default_subjects}
    return sq, oq, len(graphs), described


def binding_multiset(bindings: list[dict]):
    """Bindings as a comparable multiset."""
    from metastar.store import term_key

    frozen = []
    for b in bindings:
        frozen.append(tuple(sorted(((v.name, term_key(t)) for v, t in b.items()))))
    frozen.sort()
    return frozen
