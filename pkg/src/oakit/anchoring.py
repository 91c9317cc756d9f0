"""Resolve selectors against concrete local documents.

Offsets everywhere are Unicode code points, 0-based, end-exclusive. That is
an implementation commitment worth stating loudly: interoperating systems
disagree on the unit (bytes, UTF-16 units, code points) and this library
picks code points because they are encoding-independent and directly
testable with Python strings.

Quote resolution refuses to guess: when the prefix and suffix context does
not single out one occurrence, that is an error carrying all the tied
offsets, never a silent pick of the first one.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum

from .model import TextPositionSelector, TextQuoteSelector
from .terms import Iri

_NUMBER = re.compile(r"[0-9]+(?:\.[0-9]+)?")
_INT = re.compile(r"[0-9]+")


@dataclass(frozen=True)
class TextDocument:
    """A local document: caller-supplied identity plus immutable content."""

    id: Iri
    content: str


class AnchorMethod(Enum):
    POSITION = "position"
    QUOTE = "quote"


@dataclass(frozen=True)
class AnchorResult:
    """A resolved character span. ``text`` is always the content slice."""

    start: int
    end: int
    text: str
    method: AnchorMethod


class OutOfRange(ValueError):
    """A span reaches outside the document."""


class QuoteNotFound(LookupError):
    """The quoted text does not occur in the document."""


class AmbiguousMatch(LookupError):
    """Context scoring left more than one candidate. Carries the tied
    start offsets."""

    def __init__(self, offsets: tuple[int, ...]):
        super().__init__(f"ambiguous quote match at offsets {list(offsets)}")
        self.offsets = offsets


def resolve_text_position(doc: TextDocument, sel: TextPositionSelector) -> AnchorResult:
    """The span [start, end) of the document."""
    if sel.start > sel.end:
        raise ValueError(f"invalid selector: start {sel.start} is after end {sel.end}")
    if sel.end > len(doc.content):
        raise OutOfRange(
            f"span [{sel.start}, {sel.end}) exceeds document length {len(doc.content)}"
        )
    return AnchorResult(sel.start, sel.end, doc.content[sel.start : sel.end],
                        AnchorMethod.POSITION)


def _occurrences(content: str, needle: str) -> list[int]:
    out = []
    i = content.find(needle)
    while i >= 0:
        out.append(i)
        i = content.find(needle, i + 1)
    return out


def resolve_text_quote(doc: TextDocument, sel: TextQuoteSelector) -> AnchorResult:
    """Find the occurrence of the quoted text singled out by its context.

    Every occurrence of the exact text is scored: one point when the text
    immediately before it equals the prefix (if a prefix was given), one
    point when the text immediately after equals the suffix. Only the
    occurrences with the maximal score remain; exactly one must survive.
    """
    if not sel.exact:
        raise ValueError("quoted text must be non-empty")
    content = doc.content
    occurrences = _occurrences(content, sel.exact)
    if not occurrences:
        raise QuoteNotFound(f"quote {sel.exact!r} does not occur in {doc.id}")

    def score(pos: int) -> int:
        points = 0
        if sel.prefix is not None:
            start = pos - len(sel.prefix)
            if start >= 0 and content[start:pos] == sel.prefix:
                points += 1
        if sel.suffix is not None:
            end = pos + len(sel.exact)
            if content[end : end + len(sel.suffix)] == sel.suffix:
                points += 1
        return points

    best = max(score(pos) for pos in occurrences)
    tied = tuple(pos for pos in occurrences if score(pos) == best)
    if len(tied) > 1:
        raise AmbiguousMatch(tied)
    start = tied[0]
    end = start + len(sel.exact)
    return AnchorResult(start, end, content[start:end], AnchorMethod.QUOTE)


def make_text_position(doc: TextDocument, start: int, end: int) -> TextPositionSelector:
    _check_span(doc, start, end)
    return TextPositionSelector(start=start, end=end)


def make_text_quote(doc: TextDocument, start: int, end: int,
                    context_len: int) -> TextQuoteSelector:
    """Build a quote selector for a span, taking up to ``context_len`` code
    points of context on each side, clipped at the document edges."""
    if context_len < 0:
        raise ValueError("context length must be non-negative")
    _check_span(doc, start, end)
    content = doc.content
    return TextQuoteSelector(
        exact=content[start:end],
        prefix=content[max(0, start - context_len) : start],
        suffix=content[end : end + context_len],
    )


def _check_span(doc: TextDocument, start: int, end: int) -> None:
    if not (0 <= start <= end <= len(doc.content)):
        raise OutOfRange(
            f"span [{start}, {end}) invalid for document of length {len(doc.content)}"
        )


# ---------------------------------------------------------------------------
# Media fragments (xywh and t dimensions)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SpatialPixels:
    """A rectangle in pixels: x, y offset plus width and height."""

    x: int
    y: int
    w: int
    h: int


@dataclass(frozen=True)
class SpatialPercent:
    """A rectangle in percent of the media dimensions, each in [0, 100]."""

    x: float
    y: float
    w: float
    h: float

    def __post_init__(self) -> None:
        for v in (self.x, self.y, self.w, self.h):
            if not 0 <= v <= 100:
                raise ValueError(f"percent component out of [0, 100]: {v}")


@dataclass(frozen=True)
class TimeInterval:
    """A time range in seconds; the end may be open."""

    t0: float
    t1: float | None = None

    def __post_init__(self) -> None:
        if self.t1 is not None and self.t0 > self.t1:
            raise ValueError(f"time interval start {self.t0} after end {self.t1}")


MediaFragment = SpatialPixels | SpatialPercent | TimeInterval


class UnsupportedDimension(ValueError):
    """The fragment uses a dimension other than xywh or t."""


class MalformedFragment(ValueError):
    """The fragment value does not fit the dimension's grammar."""


def parse_media_fragment(value: str) -> MediaFragment:
    """Parse ``xywh=[percent:|pixel:]x,y,w,h`` or ``t=[npt:]t0[,t1]``."""
    if not value:
        raise MalformedFragment("empty fragment value")
    if "&" in value:
        raise UnsupportedDimension("multiple fragment dimensions are not supported")
    key, sep, rest = value.partition("=")
    if not sep:
        raise MalformedFragment(f"no dimension value in {value!r}")
    if key == "xywh":
        return _parse_xywh(rest)
    if key == "t":
        return _parse_time(rest)
    raise UnsupportedDimension(f"unsupported fragment dimension {key!r}")


def _parse_xywh(rest: str) -> SpatialPixels | SpatialPercent:
    unit = "pixel"
    if rest.startswith("percent:"):
        unit = "percent"
        rest = rest[len("percent:"):]
    elif rest.startswith("pixel:"):
        rest = rest[len("pixel:"):]
    parts = rest.split(",")
    if len(parts) != 4:
        raise MalformedFragment(f"xywh needs 4 components, got {len(parts)}")
    if unit == "pixel":
        if not all(_INT.fullmatch(p) for p in parts):
            raise MalformedFragment(f"xywh pixel components must be integers: {rest!r}")
        x, y, w, h = (int(p) for p in parts)
        return SpatialPixels(x, y, w, h)
    if not all(_NUMBER.fullmatch(p) for p in parts):
        raise MalformedFragment(f"xywh percent components must be numbers: {rest!r}")
    try:
        return SpatialPercent(*(float(p) for p in parts))
    except ValueError as exc:
        raise MalformedFragment(str(exc)) from None


def _parse_time(rest: str) -> TimeInterval:
    if rest.startswith("npt:"):
        rest = rest[len("npt:"):]
    parts = rest.split(",")
    if len(parts) > 2 or not parts[0]:
        raise MalformedFragment(f"t needs t0 and optionally t1: {rest!r}")
    if not _NUMBER.fullmatch(parts[0]):
        raise MalformedFragment(f"bad time value {parts[0]!r}")
    t0 = float(parts[0])
    t1: float | None = None
    if len(parts) == 2:
        if not _NUMBER.fullmatch(parts[1]):
            raise MalformedFragment(f"bad time value {parts[1]!r}")
        t1 = float(parts[1])
    try:
        return TimeInterval(t0, t1)
    except ValueError as exc:
        raise MalformedFragment(str(exc)) from None
