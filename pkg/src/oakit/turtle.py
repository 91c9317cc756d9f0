"""Turtle subset reader/writer and an N-Triples reader for test oracles.

The grammar covers what the annotation model needs and nothing more:
``@prefix`` directives, ``<...>`` IRIs, prefixed names, the ``a`` keyword,
';' and ',' continuations, ``_:label`` and anonymous ``[]`` blank nodes,
``( ... )`` collections, single-line string literals with ``\\" \\\\ \\n \\r \\t``
escapes plus ``@lang`` / ``^^`` suffixes, integer literals, and '#' comments.
Not supported, by design: ``@base`` and relative IRIs, decimals and
exponents, triple-quoted strings, blank node property lists.

Errors carry a 1-based line and column. Duplicate triples deduplicate
silently; document order is otherwise retained by the Graph.
"""

from __future__ import annotations

import re

from .graph import Graph
from .terms import BlankNode, Iri, Literal, NodeId, Term, Triple
from .vocab import OA, PREFIX_TABLE, RDF, XSD

_PN_LOCAL_CHAR = re.compile(r"[A-Za-z0-9_\-]")
_LOCAL_OK = re.compile(r"(?:[A-Za-z_][A-Za-z0-9_\-]*)?")
_INTEGER = re.compile(r"[+-]?[0-9]+")
_LANG = re.compile(r"[A-Za-z]+(?:-[A-Za-z0-9]+)*")
_BLANK_REF = re.compile(r"_:([A-Za-z_][A-Za-z0-9_\-]*)")

_ESCAPES = {'"': '"', "\\": "\\", "n": "\n", "r": "\r", "t": "\t"}
_UNESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\r": "\\r", "\t": "\\t"}


class TurtleSyntaxError(Exception):
    """A grammar violation, located by 1-based line and column."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.reason = message
        self.line = line
        self.column = column


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.i = 0
        self.line = 1
        self.col = 1

    def eof(self) -> bool:
        return self.i >= len(self.text)

    def peek(self, offset: int = 0) -> str:
        j = self.i + offset
        return self.text[j] if j < len(self.text) else ""

    def startswith(self, s: str) -> bool:
        return self.text.startswith(s, self.i)

    def advance(self, n: int = 1) -> str:
        taken = self.text[self.i : self.i + n]
        for ch in taken:
            if ch == "\n":
                self.line += 1
                self.col = 1
            else:
                self.col += 1
        self.i += n
        return taken

    def mark(self) -> tuple[int, int]:
        return (self.line, self.col)

    def error(self, message: str, at: tuple[int, int] | None = None) -> TurtleSyntaxError:
        line, col = at if at is not None else (self.line, self.col)
        return TurtleSyntaxError(message, line, col)

    def skip_ws(self) -> None:
        while not self.eof():
            ch = self.peek()
            if ch in " \t\r\n":
                self.advance()
            elif ch == "#":
                while not self.eof() and self.peek() != "\n":
                    self.advance()
            else:
                return

    def take_while(self, pattern: re.Pattern[str]) -> str:
        out = []
        while not self.eof() and pattern.fullmatch(self.peek()):
            out.append(self.advance())
        return "".join(out)


class _Parser:
    def __init__(self, text: str):
        self.sc = _Scanner(text)
        self.prefixes: dict[str, str] = {}
        self.triples: list[Triple] = []
        # Anonymous nodes get labels that cannot collide with any label
        # written in the document.
        self._doc_labels = set(_BLANK_REF.findall(text))
        self._anon = 0

    def fresh_blank(self) -> BlankNode:
        while True:
            label = f"gen{self._anon}"
            self._anon += 1
            if label not in self._doc_labels:
                self._doc_labels.add(label)
                return BlankNode(label)

    # -- document ---------------------------------------------------------

    def parse(self) -> Graph:
        sc = self.sc
        while True:
            sc.skip_ws()
            if sc.eof():
                break
            if sc.peek() == "@":
                self.directive()
            else:
                self.statement()
        return Graph(self.triples, self.prefixes)

    def directive(self) -> None:
        sc = self.sc
        at = sc.mark()
        word = "@" + _Scanner(sc.text[sc.i + 1 :]).take_while(_PN_LOCAL_CHAR)
        if word != "@prefix":
            raise sc.error(f"unsupported directive {word!r} (only @prefix)", at)
        sc.advance(len("@prefix"))
        if not sc.eof() and sc.peek() not in " \t\r\n#":
            raise sc.error("expected whitespace after @prefix", at)
        sc.skip_ws()
        name = sc.take_while(_PN_LOCAL_CHAR)
        if sc.peek() != ":":
            raise sc.error("expected ':' after prefix name")
        sc.advance()
        sc.skip_ws()
        iri = self.iriref(raw=True)
        sc.skip_ws()
        if sc.peek() != ".":
            raise sc.error("expected '.' after @prefix directive")
        sc.advance()
        self.prefixes[name] = iri

    def statement(self) -> None:
        sc = self.sc
        subject = self.node(role="subject")
        while True:
            sc.skip_ws()
            predicate = self.predicate()
            while True:
                sc.skip_ws()
                obj = self.node(role="object")
                self.triples.append((subject, predicate, obj))
                sc.skip_ws()
                if sc.peek() == ",":
                    sc.advance()
                    continue
                break
            if sc.peek() == ";":
                sc.advance()
                sc.skip_ws()
                if sc.peek() == ".":
                    sc.advance()
                    return
                continue
            if sc.peek() == ".":
                sc.advance()
                return
            raise sc.error("expected ',', ';' or '.' after object")

    # -- terms ------------------------------------------------------------

    def iriref(self, raw: bool = False) -> str | Iri:
        sc = self.sc
        at = sc.mark()
        if sc.peek() != "<":
            raise sc.error("expected '<' to open an IRI")
        sc.advance()
        out = []
        while True:
            if sc.eof() or sc.peek() == "\n":
                raise sc.error("unterminated IRI", at)
            ch = sc.advance()
            if ch == ">":
                break
            out.append(ch)
        value = "".join(out)
        if raw:
            return value
        try:
            return Iri(value)
        except ValueError as exc:
            raise sc.error(str(exc), at) from None

    def prefixed_name(self) -> Iri:
        sc = self.sc
        at = sc.mark()
        prefix = sc.take_while(_PN_LOCAL_CHAR)
        if sc.peek() != ":":
            if prefix == "a":
                raise sc.error("the keyword 'a' is only allowed as a predicate", at)
            raise sc.error(f"unexpected token {prefix or sc.peek()!r}", at)
        sc.advance()
        local_chars = []
        while not self.sc.eof():
            ch = sc.peek()
            if _PN_LOCAL_CHAR.fullmatch(ch):
                local_chars.append(sc.advance())
            elif ch == "." and _PN_LOCAL_CHAR.fullmatch(sc.peek(1) or ""):
                # A dot inside a local name; a trailing dot ends the statement.
                local_chars.append(sc.advance())
            else:
                break
        if prefix not in self.prefixes:
            raise sc.error(f"undeclared prefix {prefix!r}", at)
        try:
            return Iri(self.prefixes[prefix] + "".join(local_chars))
        except ValueError as exc:
            raise sc.error(str(exc), at) from None

    def predicate(self) -> Iri:
        sc = self.sc
        if sc.peek() == "<":
            return self.iriref()  # type: ignore[return-value]
        if (
            sc.peek() == "a"
            and not _PN_LOCAL_CHAR.fullmatch(sc.peek(1) or "")
            and sc.peek(1) != ":"
        ):
            sc.advance()
            return RDF.type
        return self.prefixed_name()

    def node(self, role: str) -> Term:
        sc = self.sc
        ch = sc.peek()
        if sc.eof():
            raise sc.error(f"expected {role}, found end of input")
        if ch == "<":
            return self.iriref()  # type: ignore[return-value]
        if ch == "_":
            return self.blank_label()
        if ch == "[":
            return self.anon_blank()
        if ch == "(":
            return self.collection()
        if ch == '"':
            if role == "subject":
                raise sc.error("a literal cannot be a subject")
            return self.string_literal()
        if ch.isdigit() or ch in "+-":
            if role == "subject":
                raise sc.error("a literal cannot be a subject")
            return self.integer_literal()
        if ch in ".,;":
            raise sc.error(f"expected {role}, found {ch!r}")
        return self.prefixed_name()

    def blank_label(self) -> BlankNode:
        sc = self.sc
        at = sc.mark()
        sc.advance()
        if sc.peek() != ":":
            raise sc.error("expected ':' after '_'", at)
        sc.advance()
        label = sc.take_while(_PN_LOCAL_CHAR)
        if not label:
            raise sc.error("blank node label is empty", at)
        try:
            return BlankNode(label)
        except ValueError as exc:
            raise sc.error(str(exc), at) from None

    def anon_blank(self) -> BlankNode:
        sc = self.sc
        at = sc.mark()
        sc.advance()
        sc.skip_ws()
        if sc.peek() != "]":
            raise sc.error("blank node property lists are not supported", at)
        sc.advance()
        return self.fresh_blank()

    def collection(self) -> NodeId:
        sc = self.sc
        sc.advance()
        items: list[Term] = []
        while True:
            sc.skip_ws()
            if sc.eof():
                raise sc.error("unterminated collection")
            if sc.peek() == ")":
                sc.advance()
                break
            items.append(self.node(role="object"))
        if not items:
            return RDF.nil
        cells = [self.fresh_blank() for _ in items]
        for i, item in enumerate(items):
            self.triples.append((cells[i], RDF.first, item))
            rest: Term = cells[i + 1] if i + 1 < len(cells) else RDF.nil
            self.triples.append((cells[i], RDF.rest, rest))
        return cells[0]

    def string_literal(self) -> Literal:
        sc = self.sc
        at = sc.mark()
        sc.advance()
        out = []
        while True:
            if sc.eof() or sc.peek() == "\n":
                raise sc.error("unterminated string literal", at)
            ch = sc.advance()
            if ch == '"':
                break
            if ch == "\\":
                esc = sc.advance()
                if esc not in _ESCAPES:
                    raise sc.error(f"unsupported string escape '\\{esc}'", at)
                out.append(_ESCAPES[esc])
            else:
                out.append(ch)
        lexical = "".join(out)
        if sc.peek() == "@":
            sc.advance()
            lang_at = sc.mark()
            lang = []
            while not sc.eof() and (sc.peek().isalnum() or sc.peek() == "-"):
                lang.append(sc.advance())
            tag = "".join(lang)
            if not _LANG.fullmatch(tag):
                raise sc.error(f"invalid language tag {tag!r}", lang_at)
            return Literal(lexical, lang=tag)
        if sc.startswith("^^"):
            sc.advance(2)
            if sc.peek() == "<":
                return Literal(lexical, datatype=self.iriref())  # type: ignore[arg-type]
            return Literal(lexical, datatype=self.prefixed_name())
        return Literal(lexical)

    def integer_literal(self) -> Literal:
        sc = self.sc
        at = sc.mark()
        sign = ""
        if sc.peek() in "+-":
            sign = sc.advance()
        digits = []
        while not sc.eof() and sc.peek().isdigit():
            digits.append(sc.advance())
        if not digits:
            raise sc.error("expected digits after sign", at)
        if sc.peek() == "." and sc.peek(1).isdigit():
            raise sc.error("decimal literals are not supported", at)
        if sc.peek() in "eE":
            raise sc.error("exponent literals are not supported", at)
        return Literal(sign + "".join(digits), datatype=XSD.integer)


def parse_turtle(text: str) -> Graph:
    """Parse UTF-8 text into a Graph. Raises TurtleSyntaxError with a 1-based
    line and column on the first violation."""
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def _quote(lexical: str) -> str:
    return '"' + "".join(_UNESCAPES.get(ch, ch) for ch in lexical) + '"'


def _iri_text(iri: Iri, table: dict[str, str]) -> str:
    for prefix, base in table.items():
        if iri.value.startswith(base):
            local = iri.value[len(base):]
            if _LOCAL_OK.fullmatch(local):
                return f"{prefix}:{local}"
    return f"<{iri.value}>"


def _term_text(term: Term, table: dict[str, str]) -> str:
    if isinstance(term, Iri):
        return _iri_text(term, table)
    if isinstance(term, BlankNode):
        return str(term)
    if term.lang is not None:
        return _quote(term.lexical) + "@" + term.lang
    if term.datatype == XSD.integer and _INTEGER.fullmatch(term.lexical):
        return term.lexical
    if term.datatype is not None:
        return _quote(term.lexical) + "^^" + _iri_text(term.datatype, table)
    return _quote(term.lexical)


def _local_convention_notes(g: Graph) -> list[str]:
    notes = []
    if any(p == OA.cachedCopy for _, p, _ in g):
        notes.append(
            "# note: oa:cachedCopy (archived copies of a time state) is a local convention"
        )
    request_states = {s for s, p, o in g if p == RDF.type and o == OA.HttpRequestState}
    if any(s in request_states and p == RDF.value for s, p, _ in g):
        notes.append(
            "# note: request headers are carried as one CRLF-separated block via rdf:value"
            " (local convention)"
        )
    return notes


def serialize_turtle(g: Graph) -> str:
    """Deterministic Turtle for a Graph: a prefix header for the vocabulary
    namespaces actually used, subjects ordered IRIs first then blanks
    (lexicographically), predicates and objects in graph order with the type
    predicate hoisted to an 'a' line."""
    every_iri: set[Iri] = set()
    for s, p, o in g:
        if isinstance(s, Iri):
            every_iri.add(s)
        if p != RDF.type:  # always rendered as the 'a' keyword
            every_iri.add(p)
        if isinstance(o, Iri):
            every_iri.add(o)
        elif isinstance(o, Literal) and o.datatype is not None:
            if not (o.datatype == XSD.integer and _INTEGER.fullmatch(o.lexical)):
                every_iri.add(o.datatype)
    table = {
        prefix: ns.base
        for prefix, ns in PREFIX_TABLE.items()
        if any(iri.value.startswith(ns.base) for iri in every_iri)
    }

    lines: list[str] = []
    lines.extend(_local_convention_notes(g))
    for prefix, base in table.items():
        lines.append(f"@prefix {prefix}: <{base}> .")
    if lines:
        lines.append("")

    def subject_key(s: NodeId) -> tuple[int, str]:
        return (0, s.value) if isinstance(s, Iri) else (1, s.label)

    by_subject: dict[NodeId, list[tuple[Iri, Term]]] = {}
    for s, p, o in g:
        by_subject.setdefault(s, []).append((p, o))

    for subject in sorted(by_subject, key=subject_key):
        pairs = by_subject[subject]
        pred_order: list[Iri] = []
        objects_by_pred: dict[Iri, list[Term]] = {}
        for p, o in pairs:
            if p not in objects_by_pred:
                pred_order.append(p)
                objects_by_pred[p] = []
            objects_by_pred[p].append(o)
        if RDF.type in objects_by_pred:
            pred_order.remove(RDF.type)
            pred_order.insert(0, RDF.type)
        parts = []
        for p in pred_order:
            pred_text = "a" if p == RDF.type else _term_text(p, table)
            objs = ", ".join(_term_text(o, table) for o in objects_by_pred[p])
            parts.append(f"{pred_text} {objs}")
        subject_text = _term_text(subject, table)
        if len(parts) == 1:
            lines.append(f"{subject_text} {parts[0]} .")
        else:
            body = " ;\n  ".join(parts)
            lines.append(f"{subject_text} {body} .")
        lines.append("")
    if lines and lines[-1] == "":
        lines.pop()
    return "\n".join(lines) + ("\n" if lines else "")


# ---------------------------------------------------------------------------
# N-Triples (test oracle format)
# ---------------------------------------------------------------------------

_NT_LINE = re.compile(
    r"\s*(?P<s><[^>]*>|_:\S+)\s+(?P<p><[^>]*>)\s+(?P<o>.+?)\s*\.\s*$"
)
_NT_LITERAL = re.compile(
    r'"(?P<lex>(?:[^"\\]|\\.)*)"(?:\^\^<(?P<dt>[^>]*)>|@(?P<lang>[A-Za-z][A-Za-z0-9\-]*))?$'
)


def _nt_unescape(lexical: str) -> str:
    out = []
    i = 0
    while i < len(lexical):
        ch = lexical[i]
        if ch == "\\" and i + 1 < len(lexical):
            esc = lexical[i + 1]
            if esc in _ESCAPES:
                out.append(_ESCAPES[esc])
                i += 2
                continue
        out.append(ch)
        i += 1
    return "".join(out)


def _nt_node(token: str, line_no: int) -> NodeId:
    if token.startswith("<") and token.endswith(">"):
        return Iri(token[1:-1])
    if token.startswith("_:"):
        return BlankNode(token[2:])
    raise ValueError(f"N-Triples line {line_no}: bad node {token!r}")


def parse_ntriples(text: str) -> Graph:
    """Read N-Triples style oracle lines: one triple per line, '#' comments,
    quoted literal objects with optional ^^<datatype> or @lang."""
    triples: list[Triple] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        m = _NT_LINE.match(raw)
        if not m:
            raise ValueError(f"N-Triples line {line_no}: cannot parse {raw!r}")
        subject = _nt_node(m.group("s"), line_no)
        predicate = _nt_node(m.group("p"), line_no)
        if not isinstance(predicate, Iri):
            raise ValueError(f"N-Triples line {line_no}: predicate must be an IRI")
        otoken = m.group("o")
        obj: Term
        if otoken.startswith('"'):
            lm = _NT_LITERAL.match(otoken)
            if not lm:
                raise ValueError(f"N-Triples line {line_no}: bad literal {otoken!r}")
            obj = Literal(
                _nt_unescape(lm.group("lex")),
                datatype=Iri(lm.group("dt")) if lm.group("dt") else None,
                lang=lm.group("lang"),
            )
        else:
            obj = _nt_node(otoken, line_no)
        triples.append((subject, predicate, obj))
    return Graph(triples)
