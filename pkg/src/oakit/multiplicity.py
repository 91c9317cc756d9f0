"""Expansion semantics for multiple bodies, targets and the multiplicity
constructs: each body slot relates individually to each target slot, a
Composite or List contributes all of its leaves, and a Choice contributes
its first item by default or one branch per item when alternatives are
requested.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .model import Annotation, ConstructKind, MultiplicityConstruct, ResourceRef
from .terms import NodeId


class EmptyConstruct(Exception):
    """A multiplicity construct with no items has no meaning."""


class ExpandMode(Enum):
    DEFAULT = "default"
    ALL_ALTERNATIVES = "all-alternatives"


@dataclass(frozen=True)
class Interpretation:
    """One reading of an annotation: a body leaf set related to a target
    leaf set. When the target set comes from a Composite or List, the
    construct's own identity is carried along, because the set itself can
    be the thing the annotation is about."""

    body_set: tuple[ResourceRef, ...]
    target_set: tuple[ResourceRef, ...]
    target_set_id: NodeId | None = None


def _alternatives(node, mode: ExpandMode) -> list[tuple[tuple, NodeId | None]]:
    """All readings of one slot: a list of (leaf sequence, set identity).

    A leaf is its own singleton reading. A Composite or List combines one
    reading of every item (rightmost item varying fastest) under its own
    identity. A Choice yields the readings of its first item by default, or
    the readings of every item in item order.
    """
    if not isinstance(node, MultiplicityConstruct):
        return [((node,), None)]
    if not node.items:
        raise EmptyConstruct(f"{node.kind.value} construct {node.id} has no items")
    if node.kind is ConstructKind.CHOICE:
        if mode is ExpandMode.DEFAULT:
            return _alternatives(node.items[0], mode)
        out: list[tuple[tuple, NodeId | None]] = []
        for item in node.items:
            out.extend(_alternatives(item, mode))
        return out
    combos: list[tuple] = [()]
    for item in node.items:
        combos = [
            prefix + leaves
            for prefix in combos
            for leaves, _ in _alternatives(item, mode)
        ]
    return [(combo, node.id) for combo in combos]


def expand(annotation: Annotation, mode: ExpandMode = ExpandMode.DEFAULT) -> list[Interpretation]:
    """Expand an annotation into its interpretations.

    The top level is the cross product of body slots and target slots; an
    annotation without bodies still yields one interpretation per target
    slot, with an empty body set. Output order is deterministic: body slots
    in document order, then body branches, then target slots, then target
    branches.

    The annotation is expected to validate with no errors; an empty
    construct anywhere raises EmptyConstruct.
    """
    body_readings: list[list[tuple[tuple, NodeId | None]]]
    if annotation.bodies:
        body_readings = [_alternatives(b, mode) for b in annotation.bodies]
    else:
        body_readings = [[((), None)]]
    target_readings = [_alternatives(t, mode) for t in annotation.targets]

    out: list[Interpretation] = []
    for readings in body_readings:
        for body_leaves, _ in readings:
            for t_readings in target_readings:
                for target_leaves, set_id in t_readings:
                    out.append(Interpretation(body_leaves, target_leaves, set_id))
    return out


def flatten_leaves(construct: MultiplicityConstruct):
    """Depth-first leaf collection with every Choice taking its default
    (first) branch."""
    leaves, _ = _alternatives(construct, ExpandMode.DEFAULT)[0]
    return list(leaves)
