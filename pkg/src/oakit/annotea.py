"""Convert legacy Annotea-vocabulary graphs into typed annotations.

The legacy vocabulary has one class and seven properties. The mapping:
annotates becomes the target, author the agent, a literal body becomes an
embedded text body and an IRI body an external one, related resources become
external bodies, created and modified both feed the annotation timestamp
with modified winning, and context has no general counterpart so it is
surfaced in the report for human review instead of being guessed at.

Conversion is lossless or reported: every input triple is either mapped or
listed in the report. Nothing from the legacy namespace survives in the
converted output.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graph import Graph
from .model import Annotation, EmbeddedText, ExternalResource, NodeMinter, ResourceRef
from .terms import BlankNode, Iri, Literal, NodeId, Term, Triple
from .vocab import ANNOTEA, RDF


class NoAnnotations(Exception):
    """The graph contains no subject with an annotates property."""


@dataclass(frozen=True)
class AnnoteaRecord:
    """The raw legacy record for one subject, before conversion."""

    id: NodeId
    annotates: tuple[Iri, ...]
    author: str | Iri | None = None
    body: str | Iri | None = None
    context: str | None = None
    created: str | None = None
    modified: str | None = None
    related: tuple[Iri, ...] = ()


@dataclass(frozen=True)
class ConversionEntry:
    code: str
    subject: str
    message: str


@dataclass(frozen=True)
class ConversionReport:
    entries: tuple[ConversionEntry, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", tuple(self.entries))


def _as_scalar(term: Term) -> str | Iri:
    return term if isinstance(term, Iri) else term.lexical  # type: ignore[union-attr]


def extract_annotea_records(g: Graph) -> list[AnnoteaRecord]:
    """Collect the legacy records, one per subject carrying annotates."""
    records = []
    for subject in g.subjects(predicate=ANNOTEA.annotates):
        annotates = tuple(o for o in g.objects(subject, ANNOTEA.annotates) if isinstance(o, Iri))
        author = g.value(subject, ANNOTEA.author)
        body = g.value(subject, ANNOTEA.body)
        context = g.value(subject, ANNOTEA.context)
        created = g.value(subject, ANNOTEA.created)
        modified = g.value(subject, ANNOTEA.modified)
        related = tuple(o for o in g.objects(subject, ANNOTEA.related) if isinstance(o, Iri))
        records.append(
            AnnoteaRecord(
                id=subject,
                annotates=annotates,
                author=_as_scalar(author) if author is not None else None,
                body=_as_scalar(body) if body is not None else None,
                context=context.lexical if isinstance(context, Literal) else
                        (context.value if isinstance(context, Iri) else None),
                created=created.lexical if isinstance(created, Literal) else None,
                modified=modified.lexical if isinstance(modified, Literal) else None,
                related=related,
            )
        )
    return records


def convert_annotea(g: Graph) -> tuple[list[Annotation], ConversionReport]:
    """Convert every legacy annotation in the graph. Raises NoAnnotations if
    there is nothing to convert."""
    subjects = g.subjects(predicate=ANNOTEA.annotates)
    if not subjects:
        raise NoAnnotations("no subject carries a:annotates")

    minter = NodeMinter(reserved={t.label for t in _blank_terms(g)})
    entries: list[ConversionEntry] = []
    consumed: set[Triple] = set()
    annotations: list[Annotation] = []

    for subject in subjects:
        subject_text = str(subject)

        targets: list[ResourceRef] = []
        for o in g.objects(subject, ANNOTEA.annotates):
            consumed.add((subject, ANNOTEA.annotates, o))
            if isinstance(o, Iri):
                targets.append(ExternalResource(id=o))
            else:
                entries.append(ConversionEntry(
                    "invalid-target", subject_text,
                    f"annotates object is not an IRI and was dropped: {o!r}"))

        bodies: list[ResourceRef] = []
        for o in g.objects(subject, ANNOTEA.body):
            consumed.add((subject, ANNOTEA.body, o))
            if isinstance(o, Literal):
                bodies.append(EmbeddedText(id=minter.blank(), chars=o.lexical))
            elif isinstance(o, Iri):
                bodies.append(ExternalResource(id=o))
            else:
                entries.append(ConversionEntry(
                    "unconvertible-body", subject_text,
                    "blank-node body has no counterpart and was dropped"))
        for o in g.objects(subject, ANNOTEA.related):
            consumed.add((subject, ANNOTEA.related, o))
            if isinstance(o, Iri):
                bodies.append(ExternalResource(id=o))
            else:
                entries.append(ConversionEntry(
                    "unconvertible-body", subject_text,
                    f"related object is not an IRI and was dropped: {o!r}"))

        annotated_by: Iri | None = None
        author = g.value(subject, ANNOTEA.author)
        if author is not None:
            consumed.add((subject, ANNOTEA.author, author))
            if isinstance(author, Iri):
                annotated_by = author
            else:
                entries.append(ConversionEntry(
                    "author-literal", subject_text,
                    f"author is a literal name, kept as a note: {str(author)!r}"))

        created = g.value(subject, ANNOTEA.created)
        if created is not None:
            consumed.add((subject, ANNOTEA.created, created))
        modified = g.value(subject, ANNOTEA.modified)
        if modified is not None:
            consumed.add((subject, ANNOTEA.modified, modified))
        annotated_at: str | None = None
        if modified is not None and isinstance(modified, Literal):
            annotated_at = modified.lexical
            if created is not None:
                entries.append(ConversionEntry(
                    "created-superseded", subject_text,
                    f"created {str(created)!r} dropped in favor of modified "
                    f"{modified.lexical!r}"))
        elif created is not None and isinstance(created, Literal):
            annotated_at = created.lexical

        for o in g.objects(subject, ANNOTEA.context):
            consumed.add((subject, ANNOTEA.context, o))
            entries.append(ConversionEntry(
                "context-unconvertible", subject_text,
                f"context has no general mapping, kept as an opaque note: {str(o)!r}"))

        if (subject, RDF.type, ANNOTEA.Annotation) in g:
            consumed.add((subject, RDF.type, ANNOTEA.Annotation))

        try:
            annotations.append(Annotation(
                id=subject,
                bodies=tuple(bodies),
                targets=tuple(targets),
                annotated_by=annotated_by,
                annotated_at=annotated_at,
            ))
        except ValueError as exc:
            entries.append(ConversionEntry("invalid-timestamp", subject_text, str(exc)))
            annotations.append(Annotation(
                id=subject, bodies=tuple(bodies), targets=tuple(targets),
                annotated_by=annotated_by,
            ))

    for t in g:
        if t not in consumed:
            s, p, o = t
            entries.append(ConversionEntry(
                "unmapped-triple", str(s),
                f"not mapped and not standard vocabulary: {p} {o}"))

    return annotations, ConversionReport(tuple(entries))


def _blank_terms(g: Graph) -> set[BlankNode]:
    out: set[BlankNode] = set()
    for s, _, o in g:
        if isinstance(s, BlankNode):
            out.add(s)
        if isinstance(o, BlankNode):
            out.add(o)
    return out
