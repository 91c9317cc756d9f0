"""RDF term types shared by the typed annotation model and the graph layer."""

from __future__ import annotations

import re
from dataclasses import dataclass

_SCHEME = re.compile(r"[A-Za-z][A-Za-z0-9+.\-]*:")
_FORBIDDEN = re.compile(r"[\x00-\x20<>\"{}|^`\\]")
_BLANK_LABEL = re.compile(r"[A-Za-z_][A-Za-z0-9_\-]*")


@dataclass(frozen=True, order=True)
class Iri:
    """An absolute IRI. Relative references are rejected at construction."""

    value: str

    def __post_init__(self) -> None:
        if not self.value:
            raise ValueError("IRI must be non-empty")
        if not _SCHEME.match(self.value):
            raise ValueError(f"IRI must be absolute (no scheme): {self.value!r}")
        if _FORBIDDEN.search(self.value):
            raise ValueError(f"IRI contains a forbidden character: {self.value!r}")

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True, order=True)
class BlankNode:
    """A blank node label. Labels must be unique within one document or graph."""

    label: str

    def __post_init__(self) -> None:
        if not _BLANK_LABEL.fullmatch(self.label):
            raise ValueError(f"invalid blank node label: {self.label!r}")

    def __str__(self) -> str:
        return "_:" + self.label


@dataclass(frozen=True)
class Literal:
    """An RDF literal. A literal may carry a datatype or a language tag, not both."""

    lexical: str
    datatype: Iri | None = None
    lang: str | None = None

    def __post_init__(self) -> None:
        if self.datatype is not None and self.lang is not None:
            raise ValueError("literal datatype and language tag are mutually exclusive")

    def __str__(self) -> str:
        return self.lexical


# A node that can identify a resource (subject position), and the full term
# space allowed in object position.
NodeId = Iri | BlankNode
Term = Iri | BlankNode | Literal
Triple = tuple[NodeId, Iri, Term]
