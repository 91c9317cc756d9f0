"""Typed annotation model: annotations, bodies, targets, specifiers, motivations.

All types are immutable values. The whole annotation tree lives in this module
because the resource variants are mutually recursive (a multiplicity construct
holds resources or selectors, a specific resource holds selectors and states).
Operations on specifiers and constructs live in their own modules.

Conventions used throughout:

* Node identity. Resources that are graph nodes carry a ``NodeId``. Selector,
  state and embedded-style values take an optional ``id``; ``None`` means "mint
  a fresh blank node when the value is written to a graph". Values read from a
  graph always carry the node they came from, so writing them back reproduces
  the original node identity.
* Implied classes. An embedded text body always denotes character content, so
  the content class (and the generic text class, when the media type is
  textual) is implied by the value and re-added at serialization time rather
  than stored in ``classes``.
"""

from __future__ import annotations

import re
import uuid
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence, Union

from .terms import BlankNode, Iri, NodeId, Triple
from .vocab import CNT, DCTYPES, OA

_ISO_TIMESTAMP = re.compile(
    r"\d{4}-\d{2}-\d{2}(T\d{2}:\d{2}:\d{2}(\.\d+)?(Z|[+-]\d{2}:\d{2})?)?"
)


def _is_textual(media_type: str | None) -> bool:
    return media_type is not None and media_type.lower().startswith("text/")


def _check_timestamp(value: str | None, what: str) -> None:
    if value is not None and not _ISO_TIMESTAMP.fullmatch(value):
        raise ValueError(f"{what} is not an ISO-8601 shaped timestamp: {value!r}")


# ---------------------------------------------------------------------------
# Selectors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FragmentSelector:
    """Carries the fragment component of a URI, optionally with the spec it
    conforms to. The value never includes the leading '#'."""

    value: str
    conforms_to: Iri | None = None
    id: NodeId | None = None


@dataclass(frozen=True)
class TextPositionSelector:
    """Start/end character offsets, counted in Unicode code points, 0-based,
    end-exclusive. Out-of-order offsets are representable so that validation
    can report them."""

    start: int
    end: int
    id: NodeId | None = None

    def __post_init__(self) -> None:
        if self.start < 0 or self.end < 0:
            raise ValueError("text position offsets must be non-negative")


@dataclass(frozen=True)
class TextQuoteSelector:
    """Quotes the selected text plus optional context immediately before and
    after, for use when character positions are expected to drift."""

    exact: str
    prefix: str | None = None
    suffix: str | None = None
    id: NodeId | None = None


@dataclass(frozen=True)
class SvgSelector:
    """An SVG region description, either embedded as text or referenced by IRI.
    The content is carried, never rasterized."""

    content: str | Iri
    id: NodeId | None = None

    def __post_init__(self) -> None:
        if isinstance(self.content, Iri) and self.id is not None and self.id != self.content:
            raise ValueError("an IRI-referenced SVG selector is its own node")


@dataclass(frozen=True)
class OpaqueSpecifier:
    """A selector or state of a type this library does not know. Its triples
    are preserved verbatim so unknown vocabulary round-trips losslessly."""

    id: NodeId
    triples: tuple[Triple, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "triples", tuple(self.triples))


# ---------------------------------------------------------------------------
# States
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TimeState:
    """Fixes the representation in time: a timestamp, links to archived
    copies, or both. Copies are recorded, never dereferenced."""

    when: str | None = None
    cached_copies: tuple[Iri, ...] = ()
    id: NodeId | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "cached_copies", tuple(self.cached_copies))
        if self.when is None and not self.cached_copies:
            raise ValueError("a time state needs a timestamp or at least one cached copy")
        _check_timestamp(self.when, "time state timestamp")


@dataclass(frozen=True)
class HttpRequestState:
    """The request headers needed to obtain the annotated representation."""

    headers: tuple[tuple[str, str], ...]
    id: NodeId | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "headers", tuple((n, v) for n, v in self.headers))
        seen: set[str] = set()
        for name, value in self.headers:
            if not name or ":" in name or any(c in "\r\n" for c in name + value):
                raise ValueError(f"invalid header field: {name!r}")
            if name.lower() in seen:
                raise ValueError(f"duplicate header name: {name!r}")
            seen.add(name.lower())


# ---------------------------------------------------------------------------
# Styles
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExternalCss:
    """Reference to a stylesheet by IRI."""

    iri: Iri


@dataclass(frozen=True)
class EmbeddedCss:
    """A stylesheet embedded as character content. Must parse under the
    restricted grammar (class-selector rules only); anything else is
    rejected here so styling bugs surface at the boundary."""

    chars: str
    id: NodeId | None = None

    def __post_init__(self) -> None:
        from .specifiers import parse_restricted_css  # deferred: cyclic module pair

        parse_restricted_css(self.chars)


StyleRef = Union[ExternalCss, EmbeddedCss]


# ---------------------------------------------------------------------------
# Resources
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExternalResource:
    """A body or target referenced by IRI, with optional content classes and
    media type."""

    id: Iri
    classes: frozenset[Iri] = frozenset()
    format: str | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "classes", frozenset(self.classes))


@dataclass(frozen=True)
class EmbeddedText:
    """Textual content carried inside the annotation graph. ``chars`` may be
    empty but is always present. The content class is implied and therefore
    stripped from ``classes``; so is the generic text class when the media
    type says the content is textual."""

    id: NodeId
    chars: str
    format: str | None = None
    classes: frozenset[Iri] = frozenset()

    def __post_init__(self) -> None:
        implied = {CNT.ContentAsText}
        if _is_textual(self.format):
            implied.add(DCTYPES.Text)
        object.__setattr__(self, "classes", frozenset(self.classes) - implied)


class ConstructKind(Enum):
    CHOICE = "Choice"
    COMPOSITE = "Composite"
    LIST = "List"


@dataclass(frozen=True)
class MultiplicityConstruct:
    """Choice (use one item), Composite (use all, unordered) or List (use all,
    in order). Items are resources, or selectors when the construct sits in a
    selector slot, and may be nested constructs themselves."""

    id: NodeId
    kind: ConstructKind
    items: tuple["ResourceRef | Selector", ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "items", tuple(self.items))


@dataclass(frozen=True)
class SpecificResource:
    """A segment, state or styling of a source resource. The source IRI never
    carries a fragment; segment extraction belongs to the selector."""

    id: NodeId
    source: Iri
    selector: "Selector | None" = None
    state: "State | None" = None
    style_class: str | None = None
    scope: Iri | None = None

    def __post_init__(self) -> None:
        if "#" in self.source.value:
            raise ValueError("a specific resource source must not carry a fragment")
        if self.style_class is not None:
            if not self.style_class or self.style_class.startswith("."):
                raise ValueError(f"style class must be a bare CSS class token: {self.style_class!r}")


Selector = Union[
    FragmentSelector,
    TextPositionSelector,
    TextQuoteSelector,
    SvgSelector,
    MultiplicityConstruct,
    OpaqueSpecifier,
]
State = Union[TimeState, HttpRequestState, OpaqueSpecifier]
ResourceRef = Union[ExternalResource, EmbeddedText, SpecificResource, MultiplicityConstruct]

#: Resource variants that are not constructs and not specific resources.
LEAF_BODY_TYPES = (ExternalResource, EmbeddedText)


# ---------------------------------------------------------------------------
# Annotation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Annotation:
    """The root record: why (motivations), what is said (bodies, possibly
    none for pure highlights), about what (targets, at least one for the
    annotation to be valid), plus provenance and an optional stylesheet.

    ``extras`` holds triples read from a source graph that do not map onto
    typed fields (for example media-type metadata about a source resource);
    they are written back verbatim so nothing is lost in a round trip.
    """

    id: NodeId
    motivations: tuple[Iri, ...] = ()
    bodies: tuple[ResourceRef, ...] = ()
    targets: tuple[ResourceRef, ...] = ()
    annotated_by: Iri | None = None
    annotated_at: str | None = None
    styled_by: StyleRef | None = None
    extras: tuple[Triple, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "motivations", tuple(self.motivations))
        object.__setattr__(self, "bodies", tuple(self.bodies))
        object.__setattr__(self, "targets", tuple(self.targets))
        object.__setattr__(self, "extras", tuple(self.extras))
        _check_timestamp(self.annotated_at, "annotation timestamp")


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


class Severity(Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True)
class Finding:
    severity: Severity
    code: str
    path: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    """Ordered findings (document order, then code). Validation never raises;
    everything it has to say is in here."""

    entries: tuple[Finding, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", tuple(self.entries))

    @property
    def errors(self) -> tuple[Finding, ...]:
        return tuple(e for e in self.entries if e.severity is Severity.ERROR)

    @property
    def warnings(self) -> tuple[Finding, ...]:
        return tuple(e for e in self.entries if e.severity is Severity.WARNING)

    @property
    def ok(self) -> bool:
        return not self.errors


class _Collector:
    def __init__(self) -> None:
        self.entries: list[Finding] = []
        self._order: dict[str, int] = {}

    def add(self, severity: Severity, code: str, path: str, message: str) -> None:
        self._order.setdefault(path, len(self._order))
        self.entries.append(Finding(severity, code, path, message))

    def report(self) -> ValidationReport:
        self.entries.sort(key=lambda e: (self._order[e.path], e.code))
        return ValidationReport(tuple(self.entries))


def check_selector(sel: Selector, path: str, out: _Collector) -> None:
    """Report invariant breaches of one selector (recursing into constructs)."""
    if isinstance(sel, FragmentSelector):
        if sel.value.startswith("#"):
            out.add(Severity.ERROR, "fragment-hash", path,
                    "fragment value must not start with '#'")
        elif not sel.value:
            out.add(Severity.ERROR, "empty-fragment", path, "fragment value is empty")
    elif isinstance(sel, TextPositionSelector):
        if sel.start > sel.end:
            out.add(Severity.ERROR, "position-order", path,
                    f"start {sel.start} is after end {sel.end}")
    elif isinstance(sel, TextQuoteSelector):
        if not sel.exact:
            out.add(Severity.ERROR, "empty-exact", path, "quoted text is empty")
    elif isinstance(sel, MultiplicityConstruct):
        _check_construct(sel, path, out, selector_items=True)


def _check_construct(c: MultiplicityConstruct, path: str, out: _Collector,
                     selector_items: bool, ann: Annotation | None = None) -> None:
    if not c.items:
        out.add(Severity.ERROR, "empty-construct", path,
                f"{c.kind.value} construct has no items")
        return
    for i, item in enumerate(c.items):
        sub = f"{path}.items[{i}]"
        if isinstance(item, MultiplicityConstruct):
            _check_construct(item, sub, out, selector_items, ann)
        elif selector_items:
            check_selector(item, sub, out)
        else:
            _check_ref(item, sub, out, ann)


def _check_ref(ref: ResourceRef, path: str, out: _Collector, ann: Annotation | None) -> None:
    if isinstance(ref, MultiplicityConstruct):
        _check_construct(ref, path, out, selector_items=False, ann=ann)
    elif isinstance(ref, SpecificResource):
        if ref.style_class is not None and ann is not None and ann.styled_by is None:
            out.add(Severity.WARNING, "style-class-without-stylesheet", path,
                    f"style class {ref.style_class!r} set but the annotation "
                    "references no stylesheet")
        if ref.selector is not None:
            check_selector(ref.selector, f"{path}.selector", out)


def validate(annotation: Annotation,
             registry: Sequence["Motivation"] | None = None) -> ValidationReport:
    """Structural validation. Always returns a report, never raises.

    Errors: no target at all, out-of-order text positions, fragment values
    with a leading '#', empty multiplicity constructs. Warnings: a style
    class without a stylesheet on the annotation, motivations the registry
    does not know.
    """
    if registry is None:
        registry = default_registry()
    known = {m.iri for m in registry}
    out = _Collector()
    if not annotation.targets:
        out.add(Severity.ERROR, "missing-target", "targets",
                "an annotation must have at least one target")
    for i, m in enumerate(annotation.motivations):
        if m not in known:
            out.add(Severity.WARNING, "unknown-motivation", f"motivations[{i}]",
                    f"motivation {m} is not in the registry and has no broader links")
    for i, body in enumerate(annotation.bodies):
        _check_ref(body, f"bodies[{i}]", out, annotation)
    for i, target in enumerate(annotation.targets):
        _check_ref(target, f"targets[{i}]", out, annotation)
    return out.report()


# ---------------------------------------------------------------------------
# Body classification
# ---------------------------------------------------------------------------


class BodyRole(Enum):
    COMMENT = "comment"
    TEXTUAL_TAG = "textual-tag"
    SEMANTIC_TAG = "semantic-tag"


class UnsupportedRole(Exception):
    """Raised when asked to classify something that is not a leaf body."""


def classify_body(body: ResourceRef) -> BodyRole:
    """Partition a leaf body into comment, textual tag or semantic tag.

    The tag class is the single distinguishing mark; embedded tagged content
    is a textual tag, an IRI carrying the tag class is a semantic tag. A
    semantic tag labels the target and must not be dereferenced for display.
    """
    if isinstance(body, EmbeddedText):
        return BodyRole.TEXTUAL_TAG if OA.Tag in body.classes else BodyRole.COMMENT
    if isinstance(body, ExternalResource):
        return BodyRole.SEMANTIC_TAG if OA.Tag in body.classes else BodyRole.COMMENT
    raise UnsupportedRole(f"only leaf bodies can be classified, got {type(body).__name__}")


# ---------------------------------------------------------------------------
# Motivations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Motivation:
    """A reason for creating an annotation, with SKOS-style broader links."""

    iri: Iri
    broader: tuple[Iri, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "broader", tuple(self.broader))


class CycleDetected(Exception):
    """Raised when a broader chain in the registry loops back on itself."""


def resolve_motivation(iri: Iri, registry: Sequence[Motivation]) -> Motivation:
    """Return the motivation with its transitive broader closure.

    Unknown IRIs resolve to a motivation with no broader links. The closure
    is listed in depth-first order of the registry's broader declarations,
    deduplicated, so resolving an already resolved motivation is a no-op.
    """
    index = {m.iri: m for m in registry}
    closure: list[Iri] = []
    seen: set[Iri] = set()

    def walk(node: Iri, path: frozenset[Iri]) -> None:
        entry = index.get(node)
        if entry is None:
            return
        for b in entry.broader:
            if b in path:
                raise CycleDetected(f"broader chain revisits {b}")
            if b not in seen:
                seen.add(b)
                closure.append(b)
            walk(b, path | {b})

    walk(iri, frozenset({iri}))
    return Motivation(iri, tuple(closure))


def load_motivation_registry(source: str | Path) -> list[Motivation]:
    """Load a registry file: one motivation IRI per line, optionally followed
    by its broader IRIs, '#' comments and blank lines ignored."""
    text = Path(source).read_text(encoding="utf-8")
    return parse_motivation_registry(text)


def strip_line_comment(line: str) -> str:
    """Cut a '#' comment. IRIs routinely contain '#', so a comment only
    starts at the beginning of the line or after whitespace."""
    for i, ch in enumerate(line):
        if ch == "#" and (i == 0 or line[i - 1].isspace()):
            return line[:i]
    return line


def parse_motivation_registry(text: str) -> list[Motivation]:
    out: list[Motivation] = []
    for line in text.splitlines():
        line = strip_line_comment(line).strip()
        if not line:
            continue
        first, *broader = line.split()
        out.append(Motivation(Iri(first), tuple(Iri(b) for b in broader)))
    return out


_DEFAULT_REGISTRY: list[Motivation] | None = None


def default_registry() -> list[Motivation]:
    """The registry shipped with the package: editing and tagging. Everything
    else is accepted with a warning."""
    global _DEFAULT_REGISTRY
    if _DEFAULT_REGISTRY is None:
        text = resources.files("oakit").joinpath("data/motivations.txt").read_text("utf-8")
        _DEFAULT_REGISTRY = parse_motivation_registry(text)
    return list(_DEFAULT_REGISTRY)


# ---------------------------------------------------------------------------
# Node minting
# ---------------------------------------------------------------------------


class NodeMinter:
    """Mints fresh node identifiers. Use one minter per document so blank
    labels stay unique within it."""

    def __init__(self, reserved: Iterable[str] = ()):
        self._used = set(reserved)
        self._n = 0

    def blank(self) -> BlankNode:
        while True:
            label = f"b{self._n}"
            self._n += 1
            if label not in self._used:
                self._used.add(label)
                return BlankNode(label)

    def uuid_urn(self) -> Iri:
        """A urn:uuid IRI in RFC 4122 form, for nodes that should be
        referenceable from outside the document."""
        return Iri("urn:uuid:" + str(uuid.uuid4()))

    def skolem(self, base: Iri | str) -> Iri:
        """Replace would-be blank nodes with IRIs under a base ending in '/'."""
        base_s = str(base)
        if not base_s.endswith("/"):
            raise ValueError("skolem base must end with '/'")
        return Iri(base_s + uuid.uuid4().hex)
