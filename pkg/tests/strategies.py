"""Hypothesis strategies shared by the property suites."""

from __future__ import annotations

import itertools

from hypothesis import strategies as st

from oakit import (
    Annotation,
    BlankNode,
    ConstructKind,
    EmbeddedCss,
    EmbeddedText,
    ExternalCss,
    ExternalResource,
    FragmentSelector,
    Graph,
    HttpRequestState,
    Iri,
    Literal,
    MultiplicityConstruct,
    OpaqueSpecifier,
    SpecificResource,
    SvgSelector,
    TextPositionSelector,
    TextQuoteSelector,
    TimeState,
)
from oakit.vocab import OA, XSD

# ---------------------------------------------------------------------------
# Graphs
# ---------------------------------------------------------------------------

_IRI_POOL = [
    Iri("http://example.org/a"),
    Iri("http://example.org/b"),
    Iri("http://example.org/p"),
    Iri("http://example.org/q"),
    Iri("urn:x-thing:1"),
    OA.hasBody,
    OA.item,
]
_BLANK_POOL = [BlankNode(label) for label in ("b0", "b1", "n1", "n2", "x")]
_LEXICAL = st.text(
    alphabet=['a', 'z', '"', "\\", "\n", "\r", "\t", " ", "é", "0"], max_size=8
)

iris = st.sampled_from(_IRI_POOL)
blanks = st.sampled_from(_BLANK_POOL)
literals = st.one_of(
    st.builds(Literal, _LEXICAL),
    st.builds(lambda lex, tag: Literal(lex, lang=tag),
              _LEXICAL, st.sampled_from(["en", "en-GB", "fr"])),
    st.builds(lambda n: Literal(str(n), datatype=XSD.integer),
              st.integers(-9999, 9999)),
    st.builds(lambda lex: Literal(lex, datatype=Iri("http://example.org/dt")), _LEXICAL),
)
triples = st.tuples(st.one_of(iris, blanks), iris, st.one_of(iris, blanks, literals))
graphs = st.builds(Graph, st.lists(triples, max_size=20))


# ---------------------------------------------------------------------------
# Annotations
# ---------------------------------------------------------------------------

_SOURCES = [Iri("http://example.org/doc"), Iri("http://example.org/image")]
_CLASS_POOL = [Iri("http://purl.org/dc/dcmitype/Image"), OA.Tag]
_MEDIA_FRAGS = Iri("http://www.w3.org/TR/media-frags/")
_NOTE = Iri("http://example.org/vocab#note")
_META = Iri("http://example.org/vocab#meta")


@st.composite
def annotations(draw) -> Annotation:
    """Valid annotations (no validation errors) with explicit node identity
    everywhere, so that a lower/lift cycle must reproduce them exactly."""
    counter = itertools.count()

    def node_id():
        n = next(counter)
        return Iri(f"urn:x-node:{n}") if draw(st.booleans()) else BlankNode(f"n{n}")

    def fresh_iri(kind: str) -> Iri:
        return Iri(f"urn:x-{kind}:{next(counter)}")

    def selector(depth: int):
        kinds = ["fragment", "position", "quote", "svg", "opaque"]
        if depth > 0:
            kinds.append("construct")
        kind = draw(st.sampled_from(kinds))
        if kind == "fragment":
            return FragmentSelector(
                value=draw(st.sampled_from(["xywh=1,1,5,5", "t=10,20", "char=0,5"])),
                conforms_to=draw(st.sampled_from([None, _MEDIA_FRAGS])),
                id=node_id(),
            )
        if kind == "position":
            a, b = sorted((draw(st.integers(0, 600)), draw(st.integers(0, 600))))
            return TextPositionSelector(a, b, id=node_id())
        if kind == "quote":
            return TextQuoteSelector(
                exact=draw(st.sampled_from(["abc", "the cat sat"])),
                prefix=draw(st.sampled_from([None, "", "before "])),
                suffix=draw(st.sampled_from([None, " after"])),
                id=node_id(),
            )
        if kind == "svg":
            if draw(st.booleans()):
                return SvgSelector(content="<svg><rect/></svg>", id=node_id())
            return SvgSelector(content=fresh_iri("svg"))
        if kind == "opaque":
            nid = node_id()
            return OpaqueSpecifier(id=nid, triples=((nid, _NOTE, Literal("n")),))
        return construct(depth - 1, selector_items=True)

    def state():
        which = draw(st.sampled_from(["time", "http", "opaque"]))
        if which == "time":
            when = draw(st.sampled_from([None, "2013-01-24T12:00:00Z", "2001-01-01"]))
            copies = tuple(fresh_iri("copy") for _ in range(draw(st.integers(0, 2))))
            if when is None and not copies:
                when = "2001-01-01"
            return TimeState(when=when, cached_copies=copies, id=node_id())
        if which == "http":
            headers = [("Accept", "text/html")]
            if draw(st.booleans()):
                headers.append(("User-Agent", "oakit"))
            return HttpRequestState(headers=tuple(headers), id=node_id())
        nid = node_id()
        return OpaqueSpecifier(id=nid, triples=((nid, _NOTE, Literal("s")),))

    def leaf_ref(kind: str):
        if kind == "external":
            classes = frozenset(
                c for c in _CLASS_POOL if draw(st.booleans())
            )
            return ExternalResource(
                id=fresh_iri("res"),
                classes=classes,
                format=draw(st.sampled_from([None, "text/plain", "image/png"])),
            )
        if kind == "embedded":
            return EmbeddedText(
                id=node_id(),
                chars=draw(st.sampled_from(["", "hello", 'say "hi"\nplease'])),
                format=draw(st.sampled_from([None, "text/plain", "application/json"])),
                classes=frozenset([OA.Tag] if draw(st.booleans()) else []),
            )
        return SpecificResource(
            id=node_id(),
            source=draw(st.sampled_from(_SOURCES)),
            selector=selector(1) if draw(st.booleans()) else None,
            state=state() if draw(st.booleans()) else None,
            style_class=draw(st.sampled_from([None, "yellow"])),
            scope=fresh_iri("scope") if draw(st.booleans()) else None,
        )

    def construct(depth: int, selector_items: bool) -> MultiplicityConstruct:
        kind = draw(st.sampled_from(list(ConstructKind)))
        n = draw(st.integers(1, 3))
        items = []
        for _ in range(n):
            if selector_items:
                items.append(selector(depth))
            else:
                items.append(ref(depth))
        return MultiplicityConstruct(id=node_id(), kind=kind, items=tuple(items))

    def ref(depth: int):
        if depth > 0 and draw(st.integers(0, 3)) == 0:
            return construct(depth - 1, selector_items=False)
        return leaf_ref(draw(st.sampled_from(["external", "embedded", "specific"])))

    ann_id = node_id()
    bodies = tuple(ref(1) for _ in range(draw(st.integers(0, 2))))
    targets = tuple(ref(1) for _ in range(draw(st.integers(1, 2))))
    motivations = tuple(
        m for m in (OA.editing, OA.tagging, Iri("http://example.org/motive"))
        if draw(st.booleans())
    )
    style = draw(st.sampled_from([None, "external", "embedded"]))
    styled_by = None
    if style == "external":
        styled_by = ExternalCss(fresh_iri("css"))
    elif style == "embedded":
        styled_by = EmbeddedCss(".yellow { background: yellow }", id=node_id())
    extras = ()
    if draw(st.booleans()):
        extras = ((ann_id, _META, Literal("extra")),)
    return Annotation(
        id=ann_id,
        motivations=motivations,
        bodies=bodies,
        targets=targets,
        annotated_by=draw(st.sampled_from([None, Iri("mailto:someone@example.org")])),
        annotated_at=draw(st.sampled_from([None, "2013-01-24T12:00:00Z"])),
        styled_by=styled_by,
        extras=extras,
    )
