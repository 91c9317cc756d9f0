"""Operations on specifiers: fragment URI assembly and splitting, selector
validation, style declaration lookup, and the media-type to fragment-spec
table.

Fragment functions accept and return plain strings on purpose. A fragment
URI is rebuilt as source + '#' + value, byte for byte, and the paired split
is its exact inverse; sources are allowed to be relative references here,
which the strict Iri type would reject.
"""

from __future__ import annotations

import re
from importlib import resources
from pathlib import Path

from .model import (
    FragmentSelector,
    Selector,
    ValidationReport,
    _Collector,
    check_selector,
    strip_line_comment,
)
from .terms import Iri

_CSS_IDENT = re.compile(r"[A-Za-z_\-][A-Za-z0-9_\-]*")


class SourceHasFragment(ValueError):
    """The source of a fragment join already carries a '#' component."""


class EmptyFragmentValue(ValueError):
    """A fragment value must be non-empty."""


class NoFragment(ValueError):
    """The URI handed to a split has no non-empty fragment component."""


def reconstruct_fragment_uri(source: Iri | str, value: str | FragmentSelector) -> str:
    """Rebuild a fragment URI: source + '#' + value, with no re-encoding."""
    src = str(source)
    if "#" in src:
        raise SourceHasFragment(f"source already has a fragment: {src!r}")
    val = value.value if isinstance(value, FragmentSelector) else value
    if not val:
        raise EmptyFragmentValue("fragment value is empty")
    if val.startswith("#"):
        raise ValueError(f"fragment value must not start with '#': {val!r}")
    return src + "#" + val


def decompose_fragment_uri(
    uri: Iri | str, conforms_to: Iri | None = None
) -> tuple[str, FragmentSelector]:
    """Split a fragment URI at the first '#'. The fragment spec the value
    conforms to cannot be inferred from the string, so it is taken as an
    explicit argument."""
    text = str(uri)
    idx = text.find("#")
    if idx < 0 or idx == len(text) - 1:
        raise NoFragment(f"no non-empty fragment component in {text!r}")
    return text[:idx], FragmentSelector(value=text[idx + 1 :], conforms_to=conforms_to)


def validate_selector(sel: Selector) -> ValidationReport:
    """Report invariant breaches of a single selector (recursing into
    constructs). Codes: position-order, fragment-hash, empty-exact,
    empty-fragment, empty-construct."""
    out = _Collector()
    check_selector(sel, "", out)
    return out.report()


# ---------------------------------------------------------------------------
# Restricted CSS: class-selector rules only
# ---------------------------------------------------------------------------


class CssSyntaxError(Exception):
    """The stylesheet steps outside the class-selector-only grammar."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.reason = message
        self.line = line
        self.column = column


class StyleRuleNotFound(LookupError):
    """No rule in the stylesheet selects the requested class."""


def _position(css: str, index: int) -> tuple[int, int]:
    line = css.count("\n", 0, index) + 1
    last_nl = css.rfind("\n", 0, index)
    return line, index - last_nl if last_nl >= 0 else index + 1


def _css_error(css: str, index: int, message: str) -> CssSyntaxError:
    line, col = _position(css, index)
    return CssSyntaxError(message, line, col)


def parse_restricted_css(css: str) -> list[tuple[str, str]]:
    """Parse ``.name { declarations }`` rules. Anything else, including comma
    selector lists, combinators and at-rules, is a hard error so styling
    mistakes surface instead of being skipped."""
    rules: list[tuple[str, str]] = []
    i = 0
    n = len(css)
    while True:
        while i < n and css[i].isspace():
            i += 1
        if i >= n:
            return rules
        if css[i] != ".":
            raise _css_error(css, i, "expected '.' to start a class selector")
        i += 1
        m = _CSS_IDENT.match(css, i)
        if not m:
            raise _css_error(css, i, "expected a class name after '.'")
        name = m.group(0)
        i = m.end()
        while i < n and css[i].isspace():
            i += 1
        if i >= n or css[i] != "{":
            what = css[i] if i < n else "end of input"
            raise _css_error(
                css, min(i, n - 1) if n else 0,
                f"expected '{{' after class selector, found {what!r} "
                "(selector lists and combinators are not supported)",
            )
        open_at = i
        i += 1
        end = css.find("}", i)
        if end < 0:
            raise _css_error(css, open_at, "unterminated declaration block")
        rules.append((name, css[i:end]))
        i = end + 1


def select_style_declarations(css: str, class_name: str) -> str:
    """Return the declaration text of the first rule selecting ``class_name``
    (whitespace trimmed). The whole stylesheet is parsed first, so grammar
    violations anywhere are reported even when an earlier rule matches."""
    for name, declarations in parse_restricted_css(css):
        if name == class_name:
            return declarations.strip()
    raise StyleRuleNotFound(f"no rule for class {class_name!r}")


# ---------------------------------------------------------------------------
# Media-type to fragment-spec lookup
# ---------------------------------------------------------------------------


def parse_fragment_spec_table(text: str) -> dict[str, Iri]:
    """Lines of ``media-type fragment-spec-iri``; '#' comments and blank
    lines ignored. A media type of the form ``image/*`` matches the whole
    top-level type."""
    table: dict[str, Iri] = {}
    for line in text.splitlines():
        line = strip_line_comment(line).strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"expected 'media-type iri', got {line!r}")
        table[parts[0].lower()] = Iri(parts[1])
    return table


def load_fragment_spec_table(source: str | Path) -> dict[str, Iri]:
    return parse_fragment_spec_table(Path(source).read_text(encoding="utf-8"))


_DEFAULT_TABLE: dict[str, Iri] | None = None


def default_fragment_spec_table() -> dict[str, Iri]:
    global _DEFAULT_TABLE
    if _DEFAULT_TABLE is None:
        text = resources.files("oakit").joinpath("data/fragment-specs.txt").read_text("utf-8")
        _DEFAULT_TABLE = parse_fragment_spec_table(text)
    return dict(_DEFAULT_TABLE)


def fragment_spec_for(media_type: str, table: dict[str, Iri] | None = None) -> Iri | None:
    """Look up the fragment specification for a media type, falling back to
    the ``type/*`` wildcard. Returns None when nothing matches."""
    if table is None:
        table = default_fragment_spec_table()
    mt = media_type.lower()
    if mt in table:
        return table[mt]
    top = mt.split("/", 1)[0]
    return table.get(top + "/*")
