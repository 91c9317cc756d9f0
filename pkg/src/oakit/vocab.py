"""Namespace IRIs used by the annotation vocabulary and its serializations."""

from __future__ import annotations

from .terms import Iri


class Namespace:
    """A namespace base IRI. Attribute access mints term IRIs: ``OA.hasBody``."""

    def __init__(self, base: str):
        self.base = base

    def term(self, name: str) -> Iri:
        return Iri(self.base + name)

    def __getattr__(self, name: str) -> Iri:
        if name.startswith("_"):
            raise AttributeError(name)
        return self.term(name)

    def __contains__(self, iri: object) -> bool:
        return isinstance(iri, Iri) and iri.value.startswith(self.base)

    def __repr__(self) -> str:
        return f"Namespace({self.base!r})"


OA = Namespace("http://www.w3.org/ns/oa#")
CNT = Namespace("http://www.w3.org/2011/content#")
DC = Namespace("http://purl.org/dc/elements/1.1/")
DCTERMS = Namespace("http://purl.org/dc/terms/")
DCTYPES = Namespace("http://purl.org/dc/dcmitype/")
RDF = Namespace("http://www.w3.org/1999/02/22-rdf-syntax-ns#")
ANNOTEA = Namespace("http://www.w3.org/2000/10/annotation-ns#")
AO = Namespace("http://purl.org/ao/core/")

# Not part of the annotation vocabulary itself, but needed for typed literals.
XSD = Namespace("http://www.w3.org/2001/XMLSchema#")

# Prefix table used when emitting Turtle. Order here is the header emission order.
PREFIX_TABLE: dict[str, Namespace] = {
    "oa": OA,
    "cnt": CNT,
    "dc": DC,
    "dcterms": DCTERMS,
    "dctypes": DCTYPES,
    "rdf": RDF,
    "a": ANNOTEA,
    "ao": AO,
}
