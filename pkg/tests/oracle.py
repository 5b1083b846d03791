"""Brute-force reference for chain execution.

Enumerates every ordered tuple of distinct detections and keeps those that
satisfy each level's target, adjective and containment predicates.  Written
without reusing the interpreter's search, filters or geometry helpers.
"""

import itertools
import json
from fractions import Fraction
from importlib import resources

from vizfilter.program import AnyObject, AnyText, ObjectClass, Property, TextType
from vizfilter.recognizers import recognize

_TABLE = json.loads(resources.files("vizfilter").joinpath("data/colors.json").read_text())["colors"]
_GRID = [["upper left", "upper center", "upper right"],
         ["left middle", "center middle", "right middle"],
         ["lower left", "lower center", "lower right"]]


def _inside(parent, child):
    px0, py0, px1, py1 = parent.x, parent.y, parent.x + parent.w, parent.y + parent.h
    cx0, cy0, cx1, cy1 = child.x, child.y, child.x + child.w, child.y + child.h
    ox = max(0, min(px1, cx1) - max(px0, cx0))
    oy = max(0, min(py1, cy1) - max(py0, cy0))
    return Fraction(ox * oy) / Fraction(child.w * child.h) > Fraction(1, 2)


def _color(d):
    if d.dominant_colors:
        r, g, b = d.dominant_colors[0]
        dists = [((r - c[0]) ** 2 + (g - c[1]) ** 2 + (b - c[2]) ** 2, i) for i, (_, c) in enumerate(_TABLE)]
        return _TABLE[min(dists)[1]][0]
    names = [n for n, _ in _TABLE]
    return next((a for a in d.attributes if a in names), None)


def _cell(child, parent):
    fx = (Fraction(child.x) + Fraction(child.w, 2) - parent.x) / Fraction(parent.w)
    fy = (Fraction(child.y) + Fraction(child.h, 2) - parent.y) / Fraction(parent.h)

    def idx(f):
        return 0 if f <= Fraction(1, 3) else 1 if f <= Fraction(2, 3) else 2

    return _GRID[idx(fy)][idx(fx)]


def _target_ok(target, d, registry):
    if isinstance(target, AnyObject):
        return d.kind == "object"
    if isinstance(target, ObjectClass):
        return d.kind == "object" and d.label in registry.expand(target.label)
    if isinstance(target, AnyText):
        return d.kind == "text"
    if isinstance(target, TextType):
        return d.kind == "text" and bool(recognize(target.kind, d.label))
    return False


def _adjective_ok(adj, d, parent_box, siblings):
    if adj is None:
        return True
    v = adj.value
    if adj.kind == "color":
        if d.dominant_colors:
            return _color(d) == v
        return v in d.attributes
    if adj.kind == "location":
        return _cell(d.bbox, parent_box) == v
    n = len(siblings)
    k = -(-n // 4)
    a = d.bbox.w * d.bbox.h
    areas = [s.bbox.w * s.bbox.h for s in siblings]
    if v == "largest":
        return sum(x > a for x in areas) < k
    return sum(x < a for x in areas) < k


def _level_ok(item, prefix, d, frame, registry):
    parent_box = prefix[-1].bbox if prefix else frame.bbox
    if d in prefix or not _inside(parent_box, d.bbox) or not _target_ok(item.target, d, registry):
        return False
    siblings = [s for s in frame.detections
                if s not in prefix and _inside(parent_box, s.bbox) and _target_ok(item.target, s, registry)]
    return _adjective_ok(item.adjective, d, parent_box, siblings)


def valid_tuples(chain, frame, registry, length):
    """All detection tuples (outermost first) satisfying the first ``length`` levels."""
    levels = list(reversed(chain.items))
    out = []
    for combo in itertools.permutations(frame.detections, length):
        if all(_level_ok(levels[i], combo[:i], combo[i], frame, registry) for i in range(length)):
            out.append(combo)
    return out


def oracle(chain, frame, registry):
    """Returns (match set, failure depth) for ``chain`` on ``frame``."""
    levels = list(reversed(chain.items))
    prop = levels[-1].target if isinstance(levels[-1].target, Property) else None
    n = len(levels) - (1 if prop else 0)
    for k in range(1, n + 1):
        if not valid_tuples(chain, frame, registry, k):
            return set(), k - 1
    full = valid_tuples(chain, frame, registry, n)
    if prop is None:
        t = levels[-1].target
        if isinstance(t, TextType):
            return {(tuple(d.id for d in c), " ".join(m.value for m in recognize(t.kind, c[-1].label)))
                    for c in full}, None
        return {(tuple(d.id for d in c), c[-1].label) for c in full}, None
    if prop.kind == "color":
        return {(tuple(d.id for d in c), _color(c[-1]) or "unknown color") for c in full}, None
    counts = {}
    for c in full:
        key = tuple(d.id for d in c[:-1])
        counts[key] = counts.get(key, 0) + 1
    return {(k, str(v)) for k, v in counts.items()}, None
