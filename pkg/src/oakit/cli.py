"""Command line front end.

Report-producing commands print exactly one JSON object to stdout; the
fragment utilities print plain text. Diagnostics go to stderr. Exit codes:
0 success, 1 usage error, 2 validation errors present, 3 anchoring failure,
4 parse error. Identical arguments and files produce byte-identical stdout.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .anchoring import (
    AmbiguousMatch,
    MalformedFragment,
    OutOfRange,
    QuoteNotFound,
    SpatialPercent,
    SpatialPixels,
    TextDocument,
    TimeInterval,
    UnsupportedDimension,
    parse_media_fragment,
    resolve_text_position,
    resolve_text_quote,
)
from .annotea import NoAnnotations, convert_annotea
from .graph import Graph
from .mapping import MalformedStructure, NotAnAnnotation, find_annotations, lift, lower
from .model import (
    Annotation,
    BodyRole,
    EmbeddedText,
    ExternalResource,
    FragmentSelector,
    MultiplicityConstruct,
    SpecificResource,
    SvgSelector,
    TextPositionSelector,
    TextQuoteSelector,
    classify_body,
    validate,
)
from .multiplicity import EmptyConstruct, ExpandMode, expand, flatten_leaves
from .specifiers import (
    EmptyFragmentValue,
    NoFragment,
    SourceHasFragment,
    decompose_fragment_uri,
    reconstruct_fragment_uri,
)
from .terms import Iri
from .turtle import TurtleSyntaxError, parse_turtle, serialize_turtle

SCHEMA = "oa-kit/1"

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_ANCHORING = 3
EXIT_PARSE = 4


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # noqa: A003 - argparse API
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="oakit", description="Annotation model toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate the annotations in a file")
    p.add_argument("file")

    p = sub.add_parser("convert", help="convert a legacy annotation file")
    p.add_argument("format", choices=["annotea"])
    p.add_argument("file")

    p = sub.add_parser("anchor", help="resolve selectors against local documents")
    p.add_argument("file")
    p.add_argument(
        "--doc", action="append", default=[], metavar="IRI=PATH",
        help="bind a source IRI to a local file (repeatable)",
    )

    p = sub.add_parser("expand", help="expand annotations into interpretations")
    p.add_argument("file")
    p.add_argument("--all-alternatives", action="store_true")

    p = sub.add_parser("fragment", help="fragment URI utilities")
    fsub = p.add_subparsers(dest="fragment_command", required=True)
    fj = fsub.add_parser("join", help="source + '#' + value")
    fj.add_argument("source")
    fj.add_argument("value")
    fs = fsub.add_parser("split", help="split a fragment URI at the first '#'")
    fs.add_argument("uri")

    p = sub.add_parser("tags", help="count tag bodies for tag-cloud input")
    p.add_argument("file")

    return parser


def _emit(report: dict) -> None:
    print(json.dumps(report, indent=2, sort_keys=True))


def _report(command: str, status: str, **fields) -> dict:
    return {"schema": SCHEMA, "command": command, "status": status, **fields}


def _read_graph(path: str) -> Graph:
    return parse_turtle(Path(path).read_text(encoding="utf-8"))


def _syntax_failure(command: str, exc: TurtleSyntaxError) -> int:
    _emit(_report(command, "errors", findings=[{
        "code": "syntax-error",
        "message": exc.reason,
        "line": exc.line,
        "column": exc.column,
    }]))
    return EXIT_PARSE


def _lift_all(g: Graph) -> tuple[list[Annotation], list[dict]]:
    annotations = []
    findings = []
    for root in find_annotations(g):
        try:
            annotations.append(lift(g, root))
        except (MalformedStructure, NotAnAnnotation) as exc:
            findings.append({
                "annotation": str(root),
                "code": "malformed-structure",
                "severity": "error",
                "path": getattr(exc, "path", ""),
                "message": str(exc),
            })
    return annotations, findings


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def _cmd_validate(args) -> int:
    try:
        g = _read_graph(args.file)
    except TurtleSyntaxError as exc:
        return _syntax_failure("validate", exc)
    findings: list[dict] = []
    summaries: list[dict] = []
    annotations, lift_findings = _lift_all(g)
    findings.extend(lift_findings)
    if not annotations and not lift_findings:
        findings.append({
            "annotation": None, "code": "no-annotations", "severity": "error",
            "path": "", "message": "no annotation found in the input",
        })
    for ann in annotations:
        report = validate(ann)
        for entry in report.entries:
            findings.append({
                "annotation": str(ann.id),
                "severity": entry.severity.value,
                "code": entry.code,
                "path": entry.path,
                "message": entry.message,
            })
        summaries.append({
            "id": str(ann.id),
            "errors": len(report.errors),
            "warnings": len(report.warnings),
        })
    error_count = sum(1 for f in findings if f["severity"] == "error")
    status = "ok" if error_count == 0 else "errors"
    _emit(_report(
        "validate", status,
        annotations=summaries,
        errors=error_count,
        warnings=sum(1 for f in findings if f["severity"] == "warning"),
        findings=findings,
    ))
    return EXIT_OK if error_count == 0 else EXIT_VALIDATION


def _cmd_convert(args) -> int:
    try:
        g = _read_graph(args.file)
    except TurtleSyntaxError as exc:
        return _syntax_failure("convert", exc)
    try:
        annotations, report = convert_annotea(g)
    except NoAnnotations as exc:
        _emit(_report("convert", "errors", findings=[{
            "code": "no-annotations", "severity": "error", "message": str(exc),
        }]))
        return EXIT_VALIDATION
    merged: list = []
    for ann in annotations:
        merged.extend(lower(ann))
    findings = [
        {"code": e.code, "subject": e.subject, "message": e.message}
        for e in report.entries
    ]
    _emit(_report(
        "convert", "ok",
        annotations=[str(a.id) for a in annotations],
        findings=findings,
        turtle=serialize_turtle(Graph(merged)),
    ))
    return EXIT_OK


def _doc_bindings(pairs: list[str]) -> dict[str, TextDocument]:
    docs = {}
    for pair in pairs:
        iri, sep, path = pair.partition("=")
        if not sep or not iri:
            raise _UsageError(f"--doc expects IRI=PATH, got {pair!r}")
        docs[iri] = TextDocument(id=Iri(iri), content=Path(path).read_text(encoding="utf-8"))
    return docs


def _selector_leaves(selector) -> list:
    if isinstance(selector, MultiplicityConstruct):
        return flatten_leaves(selector)
    return [selector]


def _specific_resources(ref) -> list[SpecificResource]:
    if isinstance(ref, MultiplicityConstruct):
        leaves = flatten_leaves(ref)
    else:
        leaves = [ref]
    return [leaf for leaf in leaves if isinstance(leaf, SpecificResource)]


def _region_fields(region) -> dict:
    if isinstance(region, SpatialPixels):
        return {"unit": "pixel", "x": region.x, "y": region.y, "w": region.w, "h": region.h}
    if isinstance(region, SpatialPercent):
        return {"unit": "percent", "x": region.x, "y": region.y, "w": region.w, "h": region.h}
    assert isinstance(region, TimeInterval)
    return {"unit": "seconds", "t0": region.t0, "t1": region.t1}


def _anchor_one(sel, sr: SpecificResource, docs: dict[str, TextDocument], base: dict) -> dict:
    if isinstance(sel, FragmentSelector):
        try:
            region = parse_media_fragment(sel.value)
        except UnsupportedDimension as exc:
            return {**base, "status": "error", "code": "unsupported-dimension",
                    "message": str(exc)}
        except MalformedFragment as exc:
            return {**base, "status": "error", "code": "malformed-fragment",
                    "message": str(exc)}
        return {**base, "status": "resolved", "code": "media-region",
                "region": _region_fields(region)}
    if isinstance(sel, (TextQuoteSelector, TextPositionSelector)):
        doc = docs.get(str(sr.source))
        if doc is None:
            return {**base, "status": "error", "code": "no-document",
                    "message": f"no --doc binding for {sr.source}"}
        try:
            if isinstance(sel, TextQuoteSelector):
                result = resolve_text_quote(doc, sel)
            else:
                result = resolve_text_position(doc, sel)
        except AmbiguousMatch as exc:
            return {**base, "status": "error", "code": "ambiguous-match",
                    "offsets": list(exc.offsets), "message": str(exc)}
        except QuoteNotFound as exc:
            return {**base, "status": "error", "code": "quote-not-found",
                    "message": str(exc)}
        except (OutOfRange, ValueError) as exc:
            return {**base, "status": "error", "code": "out-of-range",
                    "message": str(exc)}
        return {**base, "status": "resolved", "code": "anchored",
                "start": result.start, "end": result.end,
                "text": result.text, "method": result.method.value}
    if isinstance(sel, SvgSelector):
        return {**base, "status": "error", "code": "unsupported-selector",
                "message": "SVG content is carried, not evaluated"}
    return {**base, "status": "error", "code": "unsupported-selector",
            "message": f"cannot anchor a {type(sel).__name__}"}


def _cmd_anchor(args) -> int:
    docs = _doc_bindings(args.doc)
    try:
        g = _read_graph(args.file)
    except TurtleSyntaxError as exc:
        return _syntax_failure("anchor", exc)
    annotations, lift_findings = _lift_all(g)
    if lift_findings:
        _emit(_report("anchor", "errors", findings=lift_findings))
        return EXIT_VALIDATION
    findings: list[dict] = []
    for ann in annotations:
        for target in ann.targets:
            try:
                resources = _specific_resources(target)
            except EmptyConstruct as exc:
                findings.append({
                    "annotation": str(ann.id), "status": "error",
                    "code": "empty-construct", "message": str(exc),
                })
                continue
            for sr in resources:
                base = {
                    "annotation": str(ann.id),
                    "target": str(sr.id),
                    "source": str(sr.source),
                }
                if sr.selector is None:
                    findings.append({**base, "status": "skipped", "code": "no-selector",
                                     "message": "specific resource selects the whole source"})
                    continue
                try:
                    leaves = _selector_leaves(sr.selector)
                except EmptyConstruct as exc:
                    findings.append({**base, "status": "error",
                                     "code": "empty-construct", "message": str(exc)})
                    continue
                for sel in leaves:
                    entry = _anchor_one(sel, sr, docs, base)
                    entry["selector"] = type(sel).__name__
                    findings.append(entry)
    failed = any(f["status"] == "error" for f in findings)
    _emit(_report("anchor", "errors" if failed else "ok", findings=findings))
    return EXIT_ANCHORING if failed else EXIT_OK


def _describe_leaf(ref) -> dict:
    if isinstance(ref, ExternalResource):
        return {"kind": "external", "id": str(ref.id)}
    if isinstance(ref, EmbeddedText):
        return {"kind": "embedded-text", "id": str(ref.id), "chars": ref.chars}
    if isinstance(ref, SpecificResource):
        return {"kind": "specific-resource", "id": str(ref.id), "source": str(ref.source)}
    return {"kind": type(ref).__name__, "id": str(getattr(ref, "id", ""))}


def _cmd_expand(args) -> int:
    try:
        g = _read_graph(args.file)
    except TurtleSyntaxError as exc:
        return _syntax_failure("expand", exc)
    annotations, lift_findings = _lift_all(g)
    findings = list(lift_findings)
    for ann in annotations:
        report = validate(ann)
        for entry in report.errors:
            findings.append({
                "annotation": str(ann.id), "severity": "error",
                "code": entry.code, "path": entry.path, "message": entry.message,
            })
    if findings:
        _emit(_report("expand", "errors", findings=findings))
        return EXIT_VALIDATION
    mode = ExpandMode.ALL_ALTERNATIVES if args.all_alternatives else ExpandMode.DEFAULT
    interpretations = []
    for ann in annotations:
        for interp in expand(ann, mode):
            interpretations.append({
                "annotation": str(ann.id),
                "bodies": [_describe_leaf(leaf) for leaf in interp.body_set],
                "targets": [_describe_leaf(leaf) for leaf in interp.target_set],
                "targetSetId": str(interp.target_set_id)
                if interp.target_set_id is not None else None,
            })
    _emit(_report("expand", "ok", interpretations=interpretations))
    return EXIT_OK


def _cmd_tags(args) -> int:
    try:
        g = _read_graph(args.file)
    except TurtleSyntaxError as exc:
        return _syntax_failure("tags", exc)
    annotations, lift_findings = _lift_all(g)
    if lift_findings:
        _emit(_report("tags", "errors", findings=lift_findings))
        return EXIT_VALIDATION
    counts: dict[tuple[str, str], int] = {}
    for ann in annotations:
        for body in ann.bodies:
            if isinstance(body, MultiplicityConstruct):
                try:
                    leaves = flatten_leaves(body)
                except EmptyConstruct:
                    continue
            else:
                leaves = [body]
            for leaf in leaves:
                if not isinstance(leaf, (ExternalResource, EmbeddedText)):
                    continue
                role = classify_body(leaf)
                if role is BodyRole.TEXTUAL_TAG:
                    key = ("textual", leaf.chars)
                elif role is BodyRole.SEMANTIC_TAG:
                    key = ("semantic", str(leaf.id))
                else:
                    continue
                counts[key] = counts.get(key, 0) + 1
    tags = [
        {"kind": kind, "value": value, "count": count}
        for (kind, value), count in counts.items()
    ]
    tags.sort(key=lambda t: (-t["count"], t["kind"], t["value"]))
    _emit(_report("tags", "ok", tags=tags))
    return EXIT_OK


def _cmd_fragment(args) -> int:
    if args.fragment_command == "join":
        try:
            print(reconstruct_fragment_uri(args.source, args.value))
        except (SourceHasFragment, EmptyFragmentValue, ValueError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_USAGE
        return EXIT_OK
    try:
        source, selector = decompose_fragment_uri(args.uri)
    except NoFragment as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(source)
    print(selector.value)
    return EXIT_OK


def run(argv: list[str]) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    handlers = {
        "validate": _cmd_validate,
        "convert": _cmd_convert,
        "anchor": _cmd_anchor,
        "expand": _cmd_expand,
        "fragment": _cmd_fragment,
        "tags": _cmd_tags,
    }
    try:
        return handlers[args.command](args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, UnicodeDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
