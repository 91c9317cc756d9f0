"""Lift typed annotations out of graphs and lower them back.

Lowering is the inverse of lifting up to graph isomorphism: node identity
written in the value (ids, opaque records, extras) is reproduced verbatim,
fresh blank labels are minted only for values that do not carry a node.
Triples a lift does not understand are kept: unknown selector and state
subtypes become opaque records carrying their own triples, and any other
unconsumed triple reachable from the annotation is stored on the
annotation's ``extras`` and written back as-is.
"""

from __future__ import annotations

from .graph import Graph
from .specifiers import CssSyntaxError
from .model import (
    Annotation,
    ConstructKind,
    EmbeddedCss,
    EmbeddedText,
    ExternalCss,
    ExternalResource,
    FragmentSelector,
    HttpRequestState,
    MultiplicityConstruct,
    NodeMinter,
    OpaqueSpecifier,
    ResourceRef,
    Selector,
    SpecificResource,
    State,
    StyleRef,
    SvgSelector,
    TextPositionSelector,
    TextQuoteSelector,
    TimeState,
)
from .terms import BlankNode, Iri, Literal, NodeId, Term, Triple
from .vocab import CNT, DC, DCTERMS, DCTYPES, OA, RDF, XSD

_CONSTRUCT_KINDS = {
    OA.Choice: ConstructKind.CHOICE,
    OA.Composite: ConstructKind.COMPOSITE,
    OA.List: ConstructKind.LIST,
}
_KIND_TYPES = {v: k for k, v in _CONSTRUCT_KINDS.items()}


class NotAnAnnotation(Exception):
    """The requested root node is not typed as an annotation."""


class MalformedStructure(Exception):
    """The graph does not fit the model at the given path."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path or '<root>'}: {message}")
        self.path = path
        self.reason = message


def find_annotations(g: Graph) -> tuple[NodeId, ...]:
    """All annotation root nodes, in document order."""
    return g.subjects(predicate=RDF.type, obj=OA.Annotation)


def _int_literal(value: int) -> Literal:
    return Literal(str(value), datatype=XSD.integer)


# ---------------------------------------------------------------------------
# Lift
# ---------------------------------------------------------------------------


class _Lifter:
    def __init__(self, g: Graph):
        self.g = g
        self.consumed: set[Triple] = set()
        self.ref_memo: dict[NodeId, ResourceRef] = {}
        self.specifier_memo: dict[NodeId, Selector | State] = {}

    # -- consumption helpers ------------------------------------------------

    def take(self, triple: Triple) -> None:
        self.consumed.add(triple)

    def take_objects(self, s: NodeId, p: Iri) -> tuple[Term, ...]:
        out = []
        for o in self.g.objects(s, p):
            self.take((s, p, o))
            out.append(o)
        return tuple(out)

    def take_value(self, s: NodeId, p: Iri) -> Term | None:
        o = self.g.value(s, p)
        if o is not None:
            self.take((s, p, o))
        return o

    def take_literal(self, s: NodeId, p: Iri, path: str, required: bool = False) -> str | None:
        o = self.g.value(s, p)
        if o is None:
            if required:
                raise MalformedStructure(path, f"missing required {p}")
            return None
        if not isinstance(o, Literal):
            raise MalformedStructure(path, f"{p} must be a literal")
        self.take((s, p, o))
        return o.lexical

    def take_iri(self, s: NodeId, p: Iri, path: str) -> Iri | None:
        o = self.g.value(s, p)
        if o is None:
            return None
        if not isinstance(o, Iri):
            raise MalformedStructure(path, f"{p} must be an IRI")
        self.take((s, p, o))
        return o

    def iri_types(self, node: NodeId) -> tuple[Iri, ...]:
        return tuple(o for o in self.g.objects(node, RDF.type) if isinstance(o, Iri))

    def take_types(self, node: NodeId) -> frozenset[Iri]:
        classes = self.iri_types(node)
        for c in classes:
            self.take((node, RDF.type, c))
        return frozenset(classes)

    def take_type(self, node: NodeId, cls: Iri) -> bool:
        if (node, RDF.type, cls) in self.g:
            self.take((node, RDF.type, cls))
            return True
        return False

    # -- annotation ----------------------------------------------------------

    def lift(self, root: NodeId) -> Annotation:
        if (root, RDF.type, OA.Annotation) not in self.g:
            raise NotAnAnnotation(f"{root} has no annotation type")
        self.take((root, RDF.type, OA.Annotation))

        motivations = []
        for i, o in enumerate(self.take_objects(root, OA.isMotivatedBy)):
            if not isinstance(o, Iri):
                raise MalformedStructure(f"motivations[{i}]", "motivation must be an IRI")
            motivations.append(o)
        annotated_by = self.take_iri(root, OA.annotatedBy, "annotatedBy")
        annotated_at = self.take_literal(root, OA.annotatedAt, "annotatedAt")
        styled_by = self.lift_style(root)
        bodies = [
            self.lift_ref(o, f"bodies[{i}]")
            for i, o in enumerate(self.take_objects(root, OA.hasBody))
        ]
        targets = [
            self.lift_ref(o, f"targets[{i}]")
            for i, o in enumerate(self.take_objects(root, OA.hasTarget))
        ]
        try:
            annotation = Annotation(
                id=root,
                motivations=tuple(motivations),
                bodies=tuple(bodies),
                targets=tuple(targets),
                annotated_by=annotated_by,
                annotated_at=annotated_at,
                styled_by=styled_by,
                extras=self.collect_extras(root),
            )
        except ValueError as exc:
            raise MalformedStructure("annotatedAt", str(exc)) from None
        return annotation

    def lift_style(self, root: NodeId) -> StyleRef | None:
        o = self.g.value(root, OA.styledBy)
        if o is None:
            return None
        if isinstance(o, Literal):
            raise MalformedStructure("styledBy", "style reference must be a node")
        self.take((root, OA.styledBy, o))
        chars = self.g.value(o, CNT.chars)
        if isinstance(chars, Literal):
            self.take((o, CNT.chars, chars))
            self.take_type(o, CNT.ContentAsText)
            try:
                return EmbeddedCss(chars.lexical, id=o)
            except CssSyntaxError as exc:
                raise MalformedStructure("styledBy", str(exc)) from None
        if isinstance(o, Iri):
            return ExternalCss(o)
        raise MalformedStructure("styledBy", "blank style node carries no character content")

    # -- resources ------------------------------------------------------------

    def lift_ref(self, node: Term, path: str) -> ResourceRef:
        if isinstance(node, Literal):
            raise MalformedStructure(path, "a body or target must be a node, not a literal")
        if node in self.ref_memo:
            return self.ref_memo[node]
        types = set(self.iri_types(node))
        construct_kind = next((k for k in _CONSTRUCT_KINDS if k in types), None)
        ref: ResourceRef
        if construct_kind is not None:
            ref = self.lift_construct(node, construct_kind, path, self.lift_ref)
        elif OA.SpecificResource in types or self.g.value(node, OA.hasSource) is not None:
            ref = self.lift_specific(node, path)
        elif CNT.ContentAsText in types or isinstance(self.g.value(node, CNT.chars), Literal):
            ref = self.lift_embedded(node, path)
        elif isinstance(node, Iri):
            fmt = self.take_format(node)
            ref = ExternalResource(id=node, classes=self.take_types(node), format=fmt)
        else:
            raise MalformedStructure(path, "blank node is not a recognizable resource")
        self.ref_memo[node] = ref
        return ref

    def take_format(self, node: NodeId) -> str | None:
        o = self.g.value(node, DC.format)
        if isinstance(o, Literal):
            self.take((node, DC.format, o))
            return o.lexical
        return None

    def lift_embedded(self, node: NodeId, path: str) -> EmbeddedText:
        chars = self.take_literal(node, CNT.chars, path, required=True)
        fmt = self.take_format(node)
        classes = self.take_types(node)
        return EmbeddedText(id=node, chars=chars or "", format=fmt, classes=classes)

    def lift_specific(self, node: NodeId, path: str) -> SpecificResource:
        self.take_type(node, OA.SpecificResource)
        source = self.take_iri(node, OA.hasSource, f"{path}.source")
        if source is None:
            raise MalformedStructure(path, "specific resource has no source")
        selector = None
        sel_node = self.g.value(node, OA.hasSelector)
        if sel_node is not None:
            self.take((node, OA.hasSelector, sel_node))
            selector = self.lift_selector(sel_node, f"{path}.selector")
        state = None
        state_node = self.g.value(node, OA.hasState)
        if state_node is not None:
            self.take((node, OA.hasState, state_node))
            state = self.lift_state(state_node, f"{path}.state")
        style_class = self.take_literal(node, OA.styleClass, f"{path}.styleClass")
        scope = self.take_iri(node, OA.hasScope, f"{path}.scope")
        try:
            return SpecificResource(
                id=node, source=source, selector=selector, state=state,
                style_class=style_class, scope=scope,
            )
        except ValueError as exc:
            raise MalformedStructure(path, str(exc)) from None

    def lift_construct(self, node: Term, kind_type: Iri, path: str, lift_item) -> MultiplicityConstruct:
        if isinstance(node, Literal):
            raise MalformedStructure(path, "a construct must be a node")
        self.take((node, RDF.type, kind_type))
        kind = _CONSTRUCT_KINDS[kind_type]
        if kind is ConstructKind.LIST:
            item_nodes = self.read_list_chain(node, path)
        else:
            item_nodes = list(self.take_objects(node, OA.item))
        items = [
            lift_item(o, f"{path}.items[{i}]") for i, o in enumerate(item_nodes)
        ]
        return MultiplicityConstruct(id=node, kind=kind, items=tuple(items))

    def read_list_chain(self, head: NodeId, path: str) -> list[Term]:
        items: list[Term] = []
        cur: Term = head
        seen: set[Term] = set()
        while True:
            if cur in seen:
                raise MalformedStructure(path, "cyclic list chain")
            seen.add(cur)
            first = self.take_value(cur, RDF.first)
            if first is None:
                raise MalformedStructure(path, "list node without rdf:first")
            items.append(first)
            rest = self.take_value(cur, RDF.rest)
            if rest is None:
                raise MalformedStructure(path, "list node without rdf:rest")
            if rest == RDF.nil:
                return items
            if isinstance(rest, Literal):
                raise MalformedStructure(path, "rdf:rest must be a node")
            cur = rest

    # -- specifiers -------------------------------------------------------------

    def lift_selector(self, node: Term, path: str) -> Selector:
        if isinstance(node, Literal):
            raise MalformedStructure(path, "a selector must be a node")
        if node in self.specifier_memo:
            return self.specifier_memo[node]  # type: ignore[return-value]
        types = set(self.iri_types(node))
        sel: Selector
        construct_kind = next((k for k in _CONSTRUCT_KINDS if k in types), None)
        if construct_kind is not None:
            sel = self.lift_construct(node, construct_kind, path, self.lift_selector)
        elif OA.FragmentSelector in types:
            self.take_type(node, OA.FragmentSelector)
            value = self.take_literal(node, RDF.value, path, required=True)
            conforms = self.take_iri(node, DCTERMS.conformsTo, path)
            sel = FragmentSelector(value=value or "", conforms_to=conforms, id=node)
        elif OA.TextPositionSelector in types:
            self.take_type(node, OA.TextPositionSelector)
            start = self.take_int(node, OA.start, path)
            end = self.take_int(node, OA.end, path)
            try:
                sel = TextPositionSelector(start=start, end=end, id=node)
            except ValueError as exc:
                raise MalformedStructure(path, str(exc)) from None
        elif OA.TextQuoteSelector in types:
            self.take_type(node, OA.TextQuoteSelector)
            exact = self.take_literal(node, OA.exact, path, required=True)
            prefix = self.take_literal(node, OA.prefix, path)
            suffix = self.take_literal(node, OA.suffix, path)
            sel = TextQuoteSelector(exact=exact or "", prefix=prefix, suffix=suffix, id=node)
        elif OA.SvgSelector in types:
            self.take_type(node, OA.SvgSelector)
            chars = self.g.value(node, CNT.chars)
            if isinstance(chars, Literal):
                self.take((node, CNT.chars, chars))
                self.take_type(node, CNT.ContentAsText)
                sel = SvgSelector(content=chars.lexical, id=node)
            elif isinstance(node, Iri):
                sel = SvgSelector(content=node)
            else:
                raise MalformedStructure(path, "blank SVG selector carries no content")
        else:
            sel = self.lift_opaque(node)
        self.specifier_memo[node] = sel
        return sel

    def take_int(self, node: NodeId, p: Iri, path: str) -> int:
        lex = self.take_literal(node, p, path, required=True)
        try:
            return int(lex or "")
        except ValueError:
            raise MalformedStructure(path, f"{p} must be an integer, got {lex!r}") from None

    def lift_state(self, node: Term, path: str) -> State:
        if isinstance(node, Literal):
            raise MalformedStructure(path, "a state must be a node")
        if node in self.specifier_memo:
            return self.specifier_memo[node]  # type: ignore[return-value]
        types = set(self.iri_types(node))
        state: State
        if OA.TimeState in types:
            self.take_type(node, OA.TimeState)
            when = self.take_literal(node, OA.when, path)
            copies = []
            for o in self.take_objects(node, OA.cachedCopy):
                if not isinstance(o, Iri):
                    raise MalformedStructure(path, "cached copy must be an IRI")
                copies.append(o)
            try:
                state = TimeState(when=when, cached_copies=tuple(copies), id=node)
            except ValueError as exc:
                raise MalformedStructure(path, str(exc)) from None
        elif OA.HttpRequestState in types:
            self.take_type(node, OA.HttpRequestState)
            block = self.take_literal(node, RDF.value, path, required=True)
            try:
                state = HttpRequestState(headers=_parse_header_block(block or ""), id=node)
            except ValueError as exc:
                raise MalformedStructure(path, str(exc)) from None
        else:
            state = self.lift_opaque(node)
        self.specifier_memo[node] = state
        return state

    def lift_opaque(self, node: NodeId) -> OpaqueSpecifier:
        """Concise description of an unknown node: its own triples plus,
        recursively, those of blank nodes it points at."""
        triples: list[Triple] = []
        stack = [node]
        visited: set[NodeId] = set()
        while stack:
            cur = stack.pop(0)
            if cur in visited:
                continue
            visited.add(cur)
            for t in self.g.triples_for(cur):
                if t not in self.consumed:
                    self.take(t)
                    triples.append(t)
                    if isinstance(t[2], BlankNode):
                        stack.append(t[2])
        return OpaqueSpecifier(id=node, triples=tuple(triples))

    # -- leftovers ---------------------------------------------------------------

    def collect_extras(self, root: NodeId) -> tuple[Triple, ...]:
        """Unconsumed triples reachable from the lifted structure, in
        document order. They re-serialize verbatim."""
        closure: set[NodeId] = {root}
        for s, p, o in self.consumed:
            closure.add(s)
            if isinstance(o, (Iri, BlankNode)):
                closure.add(o)
        taken: set[Triple] = set()
        changed = True
        while changed:
            changed = False
            for t in self.g:
                if t in self.consumed or t in taken:
                    continue
                if t[0] in closure:
                    taken.add(t)
                    if isinstance(t[2], (Iri, BlankNode)):
                        closure.add(t[2])
                    changed = True
        extras = tuple(t for t in self.g if t in taken)
        for t in extras:
            self.take(t)
        return extras


def _parse_header_block(block: str) -> tuple[tuple[str, str], ...]:
    headers = []
    for line in block.split("\r\n"):
        if not line:
            continue
        name, sep, value = line.partition(":")
        if not sep:
            raise ValueError(f"header line without ':': {line!r}")
        headers.append((name.strip(), value.strip()))
    return tuple(headers)


def lift(g: Graph, root: NodeId) -> Annotation:
    """Read the annotation rooted at ``root`` out of ``g`` into a typed value.

    Shared nodes lift to shared values. Unknown selector or state subtypes
    become opaque records; any other unconsumed reachable triple lands on the
    annotation's extras. Raises NotAnAnnotation when the root is not typed,
    MalformedStructure when the graph does not fit the model.
    """
    return _Lifter(g).lift(root)


# ---------------------------------------------------------------------------
# Lower
# ---------------------------------------------------------------------------


def _collect_labels(ann: Annotation) -> set[str]:
    labels: set[str] = set()

    def see_node(node: object) -> None:
        if isinstance(node, BlankNode):
            labels.add(node.label)

    def see_triples(triples: tuple[Triple, ...]) -> None:
        for s, _, o in triples:
            see_node(s)
            see_node(o)

    def walk_specifier(spec: object) -> None:
        if spec is None:
            return
        see_node(getattr(spec, "id", None))
        if isinstance(spec, OpaqueSpecifier):
            see_triples(spec.triples)
        if isinstance(spec, MultiplicityConstruct):
            for item in spec.items:
                walk_item(item)

    def walk_item(item: object) -> None:
        if isinstance(item, (ExternalResource, EmbeddedText, SpecificResource, MultiplicityConstruct)):
            walk_ref(item)  # type: ignore[arg-type]
        else:
            walk_specifier(item)

    def walk_ref(ref: ResourceRef) -> None:
        see_node(ref.id)
        if isinstance(ref, SpecificResource):
            walk_specifier(ref.selector)
            walk_specifier(ref.state)
        elif isinstance(ref, MultiplicityConstruct):
            for item in ref.items:
                walk_item(item)

    see_node(ann.id)
    for ref in ann.bodies + ann.targets:
        walk_ref(ref)
    if isinstance(ann.styled_by, EmbeddedCss):
        see_node(ann.styled_by.id)
    see_triples(ann.extras)
    return labels


class _Lowerer:
    def __init__(self, ann: Annotation):
        self.ann = ann
        self.out: list[Triple] = []
        self.minter = NodeMinter(reserved=_collect_labels(ann))
        self._minted: dict[int, tuple[NodeId, object]] = {}

    def add(self, s: NodeId, p: Iri, o: Term) -> None:
        self.out.append((s, p, o))

    def node_of(self, obj) -> NodeId:
        node = getattr(obj, "id", None)
        if node is not None:
            return node
        if isinstance(obj, SvgSelector) and isinstance(obj.content, Iri):
            return obj.content
        key = id(obj)
        if key not in self._minted:
            self._minted[key] = (self.minter.blank(), obj)
        return self._minted[key][0]

    def lower(self) -> Graph:
        ann = self.ann
        root = ann.id
        self.add(root, RDF.type, OA.Annotation)
        for m in ann.motivations:
            self.add(root, OA.isMotivatedBy, m)
        if ann.styled_by is not None:
            self.emit_style(root, ann.styled_by)
        for body in ann.bodies:
            self.add(root, OA.hasBody, self.node_of(body))
            self.emit_ref(body)
        for target in ann.targets:
            self.add(root, OA.hasTarget, self.node_of(target))
            self.emit_ref(target)
        if ann.annotated_by is not None:
            self.add(root, OA.annotatedBy, ann.annotated_by)
        if ann.annotated_at is not None:
            self.add(root, OA.annotatedAt, Literal(ann.annotated_at))
        self.out.extend(ann.extras)
        return Graph(self.out)

    def emit_style(self, root: NodeId, style: StyleRef) -> None:
        if isinstance(style, ExternalCss):
            self.add(root, OA.styledBy, style.iri)
            return
        node = self.node_of(style)
        self.add(root, OA.styledBy, node)
        self.add(node, RDF.type, CNT.ContentAsText)
        self.add(node, CNT.chars, Literal(style.chars))

    def emit_item(self, item) -> None:
        if isinstance(item, (ExternalResource, EmbeddedText, SpecificResource, MultiplicityConstruct)):
            self.emit_ref(item)
        else:
            self.emit_specifier(item)

    def emit_ref(self, ref: ResourceRef) -> None:
        node = self.node_of(ref)
        if isinstance(ref, ExternalResource):
            for cls in sorted(ref.classes):
                self.add(node, RDF.type, cls)
            if ref.format is not None:
                self.add(node, DC.format, Literal(ref.format))
        elif isinstance(ref, EmbeddedText):
            self.add(node, RDF.type, CNT.ContentAsText)
            if ref.format is not None and ref.format.lower().startswith("text/"):
                self.add(node, RDF.type, DCTYPES.Text)
            for cls in sorted(ref.classes):
                self.add(node, RDF.type, cls)
            if ref.format is not None:
                self.add(node, DC.format, Literal(ref.format))
            self.add(node, CNT.chars, Literal(ref.chars))
        elif isinstance(ref, SpecificResource):
            self.add(node, RDF.type, OA.SpecificResource)
            self.add(node, OA.hasSource, ref.source)
            if ref.selector is not None:
                self.add(node, OA.hasSelector, self.node_of(ref.selector))
                self.emit_specifier(ref.selector)
            if ref.state is not None:
                self.add(node, OA.hasState, self.node_of(ref.state))
                self.emit_specifier(ref.state)
            if ref.style_class is not None:
                self.add(node, OA.styleClass, Literal(ref.style_class))
            if ref.scope is not None:
                self.add(node, OA.hasScope, ref.scope)
        elif isinstance(ref, MultiplicityConstruct):
            self.emit_construct(ref)
        else:  # pragma: no cover - union is closed
            raise TypeError(f"cannot lower {type(ref).__name__}")

    def emit_construct(self, c: MultiplicityConstruct) -> None:
        node = self.node_of(c)
        self.add(node, RDF.type, _KIND_TYPES[c.kind])
        if c.kind is ConstructKind.LIST:
            cell = node
            for i, item in enumerate(c.items):
                self.add(cell, RDF.first, self.node_of(item))
                self.emit_item(item)
                if i + 1 < len(c.items):
                    nxt = self.minter.blank()
                    self.add(cell, RDF.rest, nxt)
                    cell = nxt
                else:
                    self.add(cell, RDF.rest, RDF.nil)
        else:
            for item in c.items:
                self.add(node, OA.item, self.node_of(item))
                self.emit_item(item)

    def emit_specifier(self, spec) -> None:
        node = self.node_of(spec)
        if isinstance(spec, FragmentSelector):
            self.add(node, RDF.type, OA.FragmentSelector)
            self.add(node, RDF.value, Literal(spec.value))
            if spec.conforms_to is not None:
                self.add(node, DCTERMS.conformsTo, spec.conforms_to)
        elif isinstance(spec, TextPositionSelector):
            self.add(node, RDF.type, OA.TextPositionSelector)
            self.add(node, OA.start, _int_literal(spec.start))
            self.add(node, OA.end, _int_literal(spec.end))
        elif isinstance(spec, TextQuoteSelector):
            self.add(node, RDF.type, OA.TextQuoteSelector)
            self.add(node, OA.exact, Literal(spec.exact))
            if spec.prefix is not None:
                self.add(node, OA.prefix, Literal(spec.prefix))
            if spec.suffix is not None:
                self.add(node, OA.suffix, Literal(spec.suffix))
        elif isinstance(spec, SvgSelector):
            self.add(node, RDF.type, OA.SvgSelector)
            if isinstance(spec.content, str):
                self.add(node, RDF.type, CNT.ContentAsText)
                self.add(node, CNT.chars, Literal(spec.content))
        elif isinstance(spec, TimeState):
            self.add(node, RDF.type, OA.TimeState)
            if spec.when is not None:
                self.add(node, OA.when, Literal(spec.when))
            for copy in spec.cached_copies:
                self.add(node, OA.cachedCopy, copy)
        elif isinstance(spec, HttpRequestState):
            self.add(node, RDF.type, OA.HttpRequestState)
            block = "\r\n".join(f"{name}: {value}" for name, value in spec.headers)
            self.add(node, RDF.value, Literal(block))
        elif isinstance(spec, OpaqueSpecifier):
            self.out.extend(spec.triples)
        elif isinstance(spec, MultiplicityConstruct):
            self.emit_construct(spec)
        else:  # pragma: no cover - union is closed
            raise TypeError(f"cannot lower {type(spec).__name__}")


def lower(ann: Annotation) -> Graph:
    """Write a typed annotation into a Graph. Inverse of lift up to graph
    isomorphism for annotations that validate with no errors."""
    return _Lowerer(ann).lower()
