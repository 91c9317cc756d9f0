"""Namespace IRIs must match the published vocabulary bases byte for byte."""

from oakit.vocab import ANNOTEA, AO, CNT, DC, DCTERMS, DCTYPES, OA, PREFIX_TABLE, RDF


def test_namespace_bases_are_bit_exact():
    assert OA.base == "http://www.w3.org/ns/oa#"
    assert CNT.base == "http://www.w3.org/2011/content#"
    assert DC.base == "http://purl.org/dc/elements/1.1/"
    assert DCTERMS.base == "http://purl.org/dc/terms/"
    assert DCTYPES.base == "http://purl.org/dc/dcmitype/"
    assert RDF.base == "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
    assert ANNOTEA.base == "http://www.w3.org/2000/10/annotation-ns#"
    assert AO.base == "http://purl.org/ao/core/"


def test_prefix_table_matches_the_namespaces():
    assert list(PREFIX_TABLE) == ["oa", "cnt", "dc", "dcterms", "dctypes", "rdf", "a", "ao"]
    assert PREFIX_TABLE["oa"] is OA
    assert PREFIX_TABLE["a"] is ANNOTEA


def test_term_minting():
    assert OA.hasBody.value == "http://www.w3.org/ns/oa#hasBody"
    assert RDF.type.value == "http://www.w3.org/1999/02/22-rdf-syntax-ns#type"
    assert DC.format.value == "http://purl.org/dc/elements/1.1/format"
