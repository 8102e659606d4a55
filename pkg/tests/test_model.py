import pytest
from hypothesis import given
from hypothesis import strategies as st

from metastar import (
    DEFAULT_GRAPH,
    BlankNode,
    Iri,
    Literal,
    ModelError,
    PositionError,
    PrefixMap,
    Quad,
    QuotedTriple,
    Triple,
    UnknownPrefix,
    nesting_depth,
    quad,
)
from metastar.vocab import XSD_DATE, XSD_STRING, RDF_LANG_STRING

EX = "http://example.org/"
A = Iri(EX + "A")
B = Iri(EX + "B")
CONFORMS_TO = Iri(EX + "conformsTo")
CONFIDENCE = Iri(EX + "confidence")


class TestIri:
    def test_valid(self):
        assert Iri("http://example.org/x").value == "http://example.org/x"
        assert Iri("urn:uuid:1234")
        assert Iri("tag:me@example,2024:x")

    @pytest.mark.parametrize("bad", ["", "no-scheme", "http://a b", "rel/ative", "<x>", "http://x\ny"])
    def test_invalid(self, bad):
        with pytest.raises(ModelError):
            Iri(bad)


class TestBlankNode:
    def test_labels(self):
        assert BlankNode("b0").label == "b0"
        with pytest.raises(ModelError):
            BlankNode("not valid")
        with pytest.raises(ModelError):
            BlankNode("")


class TestLiteral:
    def test_plain_string_gets_string_datatype(self):
        lit = Literal("Karl-Marx-Stadt")
        assert lit.datatype == XSD_STRING
        assert lit.language is None

    def test_language_tag_forces_langstring(self):
        lit = Literal("Karl-Marx-Stadt", language="de")
        assert lit.datatype == RDF_LANG_STRING

    def test_language_with_wrong_datatype_rejected(self):
        with pytest.raises(ModelError):
            Literal("x", XSD_DATE, language="de")

    def test_langstring_without_tag_rejected(self):
        with pytest.raises(ModelError):
            Literal("x", RDF_LANG_STRING)

    def test_typed(self):
        lit = Literal("09.05.1953", XSD_DATE)
        assert lit.datatype == XSD_DATE

    def test_equality_is_lexical(self):
        from metastar.vocab import XSD_INTEGER

        assert Literal("1", XSD_INTEGER) != Literal("01", XSD_INTEGER)
        assert Literal("05.04.2022") == Literal("05.04.2022")


class TestTriple:
    def test_plain(self):
        t = Triple(A, CONFORMS_TO, B)
        assert t.subject == A and t.object == B

    def test_quoted_subject(self):
        inner = Triple(A, CONFORMS_TO, B)
        t = Triple(inner, CONFIDENCE, Literal("0.8"))
        assert t.subject == inner

    def test_literal_subject_rejected(self):
        with pytest.raises(PositionError):
            Triple(Literal("x"), CONFORMS_TO, B)

    def test_non_iri_predicate_rejected(self):
        with pytest.raises(PositionError):
            Triple(A, BlankNode("b"), B)
        with pytest.raises(PositionError):
            Triple(A, Triple(A, CONFORMS_TO, B), B)

    def test_quoted_triple_is_triple(self):
        assert QuotedTriple is Triple

    def test_structural_equality_deep(self):
        t1 = Triple(Triple(A, CONFORMS_TO, B), CONFIDENCE, Literal("0.8"))
        t2 = Triple(Triple(A, CONFORMS_TO, B), CONFIDENCE, Literal("0.8"))
        assert t1 == t2
        assert hash(t1) == hash(t2)
        assert t1 != Triple(Triple(B, CONFORMS_TO, B), CONFIDENCE, Literal("0.8"))


class TestQuad:
    def test_graph_positions(self):
        q = quad(A, CONFORMS_TO, B)
        assert q.graph == DEFAULT_GRAPH
        assert quad(A, CONFORMS_TO, B, Iri(EX + "g")).graph == Iri(EX + "g")
        assert quad(A, CONFORMS_TO, B, BlankNode("g")).graph == BlankNode("g")

    def test_literal_graph_rejected(self):
        with pytest.raises(PositionError):
            Quad(Triple(A, CONFORMS_TO, B), Literal("g"))

    def test_quoted_graph_rejected(self):
        with pytest.raises(PositionError):
            Quad(Triple(A, CONFORMS_TO, B), Triple(A, CONFORMS_TO, B))


class TestNestingDepth:
    def test_flat(self):
        assert nesting_depth(Triple(A, CONFORMS_TO, B)) == 0

    def test_annotation_shape(self):
        t = Triple(Triple(A, CONFORMS_TO, B), CONFIDENCE, Literal("0.8"))
        assert nesting_depth(t) == 1

    def test_double_nesting_matches_recursive_count(self):
        # oracle: count << >> nesting by hand on the built term
        def count(t):
            best = 0
            for side in (t.subject, t.object):
                if isinstance(side, Triple):
                    best = max(best, 1 + count(side))
            return best

        inner = Triple(A, CONFORMS_TO, B)
        mid = Triple(inner, Iri(EX + "q"), Iri(EX + "C"))
        outer = Triple(mid, Iri(EX + "r"), Iri(EX + "D"))
        assert count(outer) == 2
        assert nesting_depth(outer) == 2
        both = Triple(mid, Iri(EX + "r"), inner)
        assert nesting_depth(both) == count(both) == 2


class TestPrefixMap:
    def test_expand(self):
        pm = PrefixMap({"dct": "http://purl.org/dc/terms/"})
        assert pm.expand("dct:issued") == Iri("http://purl.org/dc/terms/issued")

    def test_expand_geonames(self):
        pm = PrefixMap({"gn": "http://www.geonames.org/ontology#"})
        assert pm.expand("gn:alternateName") == Iri("http://www.geonames.org/ontology#alternateName")

    def test_unknown_prefix(self):
        pm = PrefixMap()
        with pytest.raises(UnknownPrefix):
            pm.expand("zz:x")

    def test_last_binding_wins(self):
        pm = PrefixMap()
        pm.bind("p", "http://one.example/")
        pm.bind("p", "http://two.example/")
        assert pm.expand("p:x") == Iri("http://two.example/x")

    def test_empty_prefix(self):
        pm = PrefixMap({"": "http://example.org/"})
        assert pm.expand(":data") == Iri("http://example.org/data")

    def test_resolve_relative(self):
        pm = PrefixMap(base=Iri("http://example.org/"))
        assert pm.resolve("entity") == Iri("http://example.org/entity")
        assert pm.resolve("http://other.example/x") == Iri("http://other.example/x")

    def test_resolve_without_base(self):
        with pytest.raises(ModelError):
            PrefixMap().resolve("entity")


# property: equality and hashing stay consistent over deep structures

_iris = st.sampled_from([A, B, CONFORMS_TO, Iri(EX + "C")])
_literals = st.sampled_from([Literal("0.8"), Literal("x", language="de"), Literal("1889")])
_nodes = _iris | st.sampled_from([BlankNode("b1"), BlankNode("b2")])


def _triples(children):
    return st.builds(Triple, _nodes | children, _iris, _nodes | _literals | children)


_terms = st.recursive(_triples(st.nothing()), _triples, max_leaves=6)


@given(_terms, _terms)
def test_hash_consistent_with_equality(t1, t2):
    if t1 == t2:
        assert hash(t1) == hash(t2)
    rebuilt = Triple(t1.subject, t1.predicate, t1.object)
    assert rebuilt == t1 and hash(rebuilt) == hash(t1)
