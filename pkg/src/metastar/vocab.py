"""Well-known namespaces and the built-in annotation vocabulary.

``NAMESPACES`` covers the vocabularies the bundled corpus uses; the empty
label and ``ex`` both denote the example namespace.  The ``ex:`` terms below
are the small built-in vocabulary understood by the transformation layer:
``replaceSubjectBy`` directives and the ``replaced`` lineage predicate.
"""

from .model import Iri, PrefixMap, RDF, XSD

EX = "http://example.org/"

NAMESPACES: dict[str, str] = {
    "rdf": RDF,
    "owl": "http://www.w3.org/2002/07/owl#",
    "xsd": XSD,
    "ex": EX,
    "": EX,
    "dcat": "http://www.w3.org/ns/dcat#",
    "dct": "http://purl.org/dc/terms/",
    "dc": "http://purl.org/dc/elements/1.1/",
    "foaf": "http://xmlns.com/foaf/0.1/",
    "prov": "http://www.w3.org/ns/prov#",
    "dbp": "http://dbpedia.org/property/",
    "dbo": "http://dbpedia.org/ontology/",
    "gn": "http://www.geonames.org/ontology#",
    "gndo": "http://d-nb.info/standards/elementset/gnd#",
}

RDF_TYPE = Iri(RDF + "type")
XSD_STRING = Iri(XSD + "string")
XSD_INTEGER = Iri(XSD + "integer")
XSD_DECIMAL = Iri(XSD + "decimal")
XSD_DOUBLE = Iri(XSD + "double")
XSD_BOOLEAN = Iri(XSD + "boolean")
XSD_DATE = Iri(XSD + "date")
RDF_LANG_STRING = Iri(RDF + "langString")

REPLACE_SUBJECT_BY = Iri(EX + "replaceSubjectBy")
REPLACED = Iri(EX + "replaced")
VALID_FROM = Iri(EX + "valid_from")
VALID_TO = Iri(EX + "valid_to")


def well_known_prefixes() -> PrefixMap:
    """A fresh prefix map holding all well-known namespaces."""
    return PrefixMap(NAMESPACES)
