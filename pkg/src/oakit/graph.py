"""Triple container with set semantics, plus isomorphism and skolemization.

A Graph is an immutable, duplicate-free collection of triples. Insertion
order is retained (first occurrence wins) because statement order in a
document is meaningful to readers, but equality and isomorphism treat the
triples as a set.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Mapping

from .terms import BlankNode, Iri, Literal, NodeId, Term, Triple


class Graph:
    """A set of (subject, predicate, object) triples and the prefix map the
    source document declared. Prefixes are serialization hints only and do
    not take part in equality."""

    __slots__ = ("_triples", "_set", "prefixes")

    def __init__(self, triples: Iterable[Triple] = (), prefixes: Mapping[str, str] | None = None):
        seen: set[Triple] = set()
        ordered: list[Triple] = []
        for t in triples:
            s, p, o = t
            if not isinstance(s, (Iri, BlankNode)):
                raise TypeError(f"subject must be an IRI or blank node: {s!r}")
            if not isinstance(p, Iri):
                raise TypeError(f"predicate must be an IRI: {p!r}")
            if not isinstance(o, (Iri, BlankNode, Literal)):
                raise TypeError(f"object must be an IRI, blank node or literal: {o!r}")
            if t not in seen:
                seen.add(t)
                ordered.append(t)
        self._triples: tuple[Triple, ...] = tuple(ordered)
        self._set: frozenset[Triple] = frozenset(seen)
        self.prefixes: dict[str, str] = dict(prefixes or {})

    def __iter__(self) -> Iterator[Triple]:
        return iter(self._triples)

    def __len__(self) -> int:
        return len(self._triples)

    def __contains__(self, triple: object) -> bool:
        return triple in self._set

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._set == other._set

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"<Graph with {len(self._triples)} triples>"

    @property
    def triple_set(self) -> frozenset[Triple]:
        return self._set

    def triples_for(self, subject: NodeId) -> tuple[Triple, ...]:
        return tuple(t for t in self._triples if t[0] == subject)

    def objects(self, subject: NodeId, predicate: Iri) -> tuple[Term, ...]:
        return tuple(o for s, p, o in self._triples if s == subject and p == predicate)

    def value(self, subject: NodeId, predicate: Iri) -> Term | None:
        for s, p, o in self._triples:
            if s == subject and p == predicate:
                return o
        return None

    def subjects(self, predicate: Iri | None = None, obj: Term | None = None) -> tuple[NodeId, ...]:
        out: list[NodeId] = []
        seen: set[NodeId] = set()
        for s, p, o in self._triples:
            if predicate is not None and p != predicate:
                continue
            if obj is not None and o != obj:
                continue
            if s not in seen:
                seen.add(s)
                out.append(s)
        return tuple(out)


def _blank_labels(triple: Triple) -> tuple[str, ...]:
    return tuple(t.label for t in (triple[0], triple[2]) if isinstance(t, BlankNode))


def graph_blank_labels(g: Graph) -> set[str]:
    return {label for t in g for label in _blank_labels(t)}


def _substitute(triple: Triple, mapping: Mapping[str, NodeId]) -> Triple:
    s, p, o = triple
    if isinstance(s, BlankNode) and s.label in mapping:
        s = mapping[s.label]
    if isinstance(o, BlankNode) and o.label in mapping:
        o = mapping[o.label]
    return (s, p, o)


def _term_shape(term: Term, label: str) -> object:
    if isinstance(term, BlankNode):
        return "*" if term.label == label else "_"
    return term


def _signature(label: str, triples: Iterable[Triple]) -> tuple:
    """Shape of a blank node: its triples with itself starred and other
    blanks anonymized. Isomorphic nodes must share a signature."""
    patterns = []
    for s, p, o in triples:
        if (isinstance(s, BlankNode) and s.label == label) or (
            isinstance(o, BlankNode) and o.label == label
        ):
            patterns.append((repr(_term_shape(s, label)), p.value, repr(_term_shape(o, label))))
    return tuple(sorted(patterns))


def isomorphic(g1: Graph, g2: Graph) -> bool:
    """True iff some bijection over blank labels maps g1's triple set onto
    g2's. Ground triples must match exactly."""
    s1, s2 = g1.triple_set, g2.triple_set
    if len(s1) != len(s2):
        return False
    ground1 = frozenset(t for t in s1 if not _blank_labels(t))
    ground2 = frozenset(t for t in s2 if not _blank_labels(t))
    if ground1 != ground2:
        return False
    rest1 = sorted(s1 - ground1, key=repr)
    rest2 = frozenset(s2 - ground2)
    labels1 = sorted({label for t in rest1 for label in _blank_labels(t)})
    labels2 = sorted({label for t in rest2 for label in _blank_labels(t)})
    if len(labels1) != len(labels2):
        return False

    sig1 = {lab: _signature(lab, rest1) for lab in labels1}
    sig2 = {lab: _signature(lab, rest2) for lab in labels2}
    if sorted(sig1.values()) != sorted(sig2.values()):
        return False
    candidates = {
        lab: [lab2 for lab2 in labels2 if sig2[lab2] == sig1[lab]] for lab in labels1
    }
    # Most constrained label first keeps the backtracking shallow.
    order = sorted(labels1, key=lambda lab: len(candidates[lab]))

    def assign(i: int, mapping: dict[str, NodeId], used: set[str]) -> bool:
        if i == len(order):
            return {_substitute(t, mapping) for t in rest1} == rest2
        lab = order[i]
        for lab2 in candidates[lab]:
            if lab2 in used:
                continue
            mapping[lab] = BlankNode(lab2)
            used.add(lab2)
            # Any triple now fully mapped must exist on the other side.
            ok = all(
                _substitute(t, mapping) in rest2
                for t in rest1
                if all(label in mapping for label in _blank_labels(t))
            )
            if ok and assign(i + 1, mapping, used):
                return True
            del mapping[lab]
            used.discard(lab2)
        return False

    return assign(0, {}, set())


def skolemize(g: Graph, base: Iri | str) -> Graph:
    """Replace every blank node with an IRI under ``base``. Tokens are
    assigned in sorted label order, so the result is stable for a given
    graph, and applying the function twice is the identity."""
    base_s = str(base)
    if not base_s.endswith("/"):
        raise ValueError("skolem base must end with '/'")
    labels = sorted(graph_blank_labels(g))
    mapping: dict[str, NodeId] = {
        lab: Iri(f"{base_s}genid{i}") for i, lab in enumerate(labels)
    }
    return Graph((_substitute(t, mapping) for t in g), g.prefixes)
