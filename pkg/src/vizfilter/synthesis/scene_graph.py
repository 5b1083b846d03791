"""Explore mode: turn one selected detection into a program.

Detections are arranged in a containment tree rooted at the frame.  The
program for a selected node is simply its branch: the node, then each
ancestor up to (not including) the frame.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..program import Adjective, AnyText, FindChain, Item, ObjectClass, Program, Target, TextType
from ..recognizers import most_specific, recognize
from ..registry import canonical_adjective, default_registry
from ..scene import Detection, SceneFrame, majority_contains


@dataclass(frozen=True)
class SceneNode:
    detection: Detection
    parent: str | None  # None = the frame itself
    target: Target
    hints: tuple[Adjective, ...] = ()

    @property
    def id(self) -> str:
        return self.detection.id


@dataclass
class SceneGraph:
    frame: SceneFrame
    nodes: dict[str, SceneNode]
    children: dict[str | None, list[str]]
    flags: list[str] = field(default_factory=list)

    def ancestors(self, node_id: str) -> list[str]:
        out = []
        p = self.nodes[node_id].parent
        while p is not None:
            out.append(p)
            p = self.nodes[p].parent
        return out

    def depth(self, node_id: str) -> int:
        return len(self.ancestors(node_id)) + 1


@dataclass(frozen=True)
class SelectableItem:
    node_id: str
    display: str
    target: Target


class SelectionError(ValueError):
    pass


def guess_target(d: Detection) -> Target:
    if d.kind == "object":
        return ObjectClass(d.label)
    kind = most_specific(d.label)
    return TextType(kind) if kind else AnyText()


def adjective_hints(d: Detection) -> tuple[Adjective, ...]:
    out = []
    for a in d.attributes:
        canon = canonical_adjective(a)
        if canon is not None and Adjective(canon) not in out:
            out.append(Adjective(canon))
    return tuple(out)


def _outranks(a: Detection, b: Detection) -> bool:
    # strict total order: bigger area wins, equal areas fall back to id order
    if a.bbox.area != b.bbox.area:
        return a.bbox.area > b.bbox.area
    return a.id < b.id


def build_scene_graph(frame: SceneFrame) -> SceneGraph:
    """Parent of each detection = the smallest larger detection that mostly contains it."""
    nodes: dict[str, SceneNode] = {}
    flags: list[str] = []
    for d in frame.detections:
        containers = [e for e in frame.detections
                      if e is not d and _outranks(e, d) and majority_contains(e.bbox, d.bbox)]
        parent = min(containers, key=lambda e: (e.bbox.area, e.id)) if containers else None
        if parent is not None and parent.bbox.area == d.bbox.area:
            flags.append(f"{d.id!r} and {parent.id!r} have equal area; parent chosen by id")
        nodes[d.id] = SceneNode(d, parent.id if parent else None, guess_target(d), adjective_hints(d))
    children: dict[str | None, list[str]] = {None: []}
    for d in frame.detections:
        children.setdefault(d.id, [])
        children.setdefault(nodes[d.id].parent, []).append(d.id)
    return SceneGraph(frame, nodes, children, flags)


def _display(g: SceneGraph, node: SceneNode) -> str:
    d = node.detection
    s = d.label if d.kind == "object" else f"text `{d.label}'"
    if node.parent is not None:
        p = g.nodes[node.parent].detection
        s += " on " + (p.label if p.kind == "object" else f"text `{p.label}'")
    return s


def list_items(g: SceneGraph) -> list[SelectableItem]:
    """Every node, depth first, children in frame order."""
    out: list[SelectableItem] = []
    stack = list(reversed(g.children[None]))
    while stack:
        nid = stack.pop()
        node = g.nodes[nid]
        out.append(SelectableItem(nid, _display(g, node), node.target))
        stack.extend(reversed(g.children.get(nid, [])))
    return out


def generate_from_selection(g: SceneGraph, node_id: str | None) -> Program:
    if node_id is None or node_id == "root":
        raise SelectionError("the frame itself cannot be selected")
    if node_id not in g.nodes:
        raise SelectionError(f"no item with id {node_id!r}")
    items = []
    for nid in [node_id, *g.ancestors(node_id)]:
        node = g.nodes[nid]
        hint = next((h for h in node.hints if _hint_holds(g, node, h)), None)
        items.append(Item(node.target, hint))
    return Program((FindChain(tuple(items)),))


def _hint_holds(g: SceneGraph, node: SceneNode, hint: Adjective) -> bool:
    """True if ``hint`` would keep ``node`` among its same-target siblings."""
    from ..interpreter import apply_adjective

    region = g.nodes[node.parent].detection.bbox if node.parent else g.frame.bbox
    path = set(g.ancestors(node.id))
    same = [d for d in g.frame.detections
            if d.id not in path and majority_contains(region, d.bbox) and _same_target(node.target, d)]
    return node.detection in apply_adjective(hint, same, region, g.frame)


def _same_target(t: Target, d: Detection) -> bool:
    if isinstance(t, ObjectClass):
        return d.kind == "object" and d.label in default_registry().expand(t.label)
    if isinstance(t, TextType):
        return d.kind == "text" and bool(recognize(t.kind, d.label))
    return d.kind == "text"

