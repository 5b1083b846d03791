"""Run programs against annotated frames and phrase the outcome.

A chain is executed outermost item first.  Each surviving detection becomes
the search region for the next item, which is how a program "crops" the
frame step by step.  When a level comes up empty the run stops there and the
result records how far it got, so the message can still say something
useful ("Found bus, no number").
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

from .program import (
    Adjective,
    AnyObject,
    FindChain,
    Item,
    ObjectClass,
    Program,
    Property,
    Target,
    TextType,
    is_text_target,
    target_noun,
)
from .recognizers import recognize
from .registry import COLORS, Registry, default_registry
from .scene import (
    BBox,
    DetectorBackend,
    DetectQuery,
    Detection,
    FixtureBackend,
    SceneFrame,
    frame_position_phrase,
    name_color,
    quadrant_label,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExecutionMatch:
    path: tuple[str, ...]  # detection ids, outermost first
    value: str


class AdjectiveMiss(NamedTuple):
    depth: int
    requested: str
    observed: str | None


@dataclass
class ChainResult:
    matches: list[ExecutionMatch] = field(default_factory=list)
    failure_depth: int | None = None
    adjective_miss: AdjectiveMiss | None = None
    partial_labels: list[str] = field(default_factory=list)
    backup_texts: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def found(self) -> bool:
        return bool(self.matches)


@dataclass
class RunResult:
    chains: list[ChainResult]
    rendered: str


@dataclass(frozen=True)
class Announcement:
    frame_id: str
    text: str


class InterpreterError(RuntimeError):
    pass


# ---------------------------------------------------------------- adjectives


def detection_color(d: Detection) -> str | None:
    if d.dominant_colors:
        return name_color(d.dominant_colors)
    for a in d.attributes:
        if a in COLORS:
            return a
    return None


def _color_matches(name: str, d: Detection, warnings: list[str] | None) -> bool:
    if d.dominant_colors:
        return name_color(d.dominant_colors) == name
    if d.attributes:
        return name in d.attributes
    msg = f"detection {d.id!r} has no color data; treated as not {name}"
    log.warning(msg)
    if warnings is not None:
        warnings.append(msg)
    return False


def _size_filter(value: str, candidates: list[Detection]) -> list[Detection]:
    areas = sorted(d.bbox.area for d in candidates)
    n = len(areas)
    if n < 4:
        bound = areas[-1] if value == "largest" else areas[0]
    else:
        # nearest-rank quartile, counted in from the relevant end
        k = math.ceil(n / 4)
        bound = areas[n - k] if value == "largest" else areas[k - 1]
    if value == "largest":
        return [d for d in candidates if d.bbox.area >= bound]
    return [d for d in candidates if d.bbox.area <= bound]


def apply_adjective(adj: Adjective, candidates: list[Detection], parent_bbox: BBox,
                    frame: SceneFrame | None = None, warnings: list[str] | None = None) -> list[Detection]:
    """Keep the candidates that satisfy ``adj``; order is preserved.

    Size is relative to the other candidates, which are expected to be the
    same target inside the same parent.
    """
    if not candidates:
        return []
    if adj.kind == "color":
        return [d for d in candidates if _color_matches(adj.value, d, warnings)]
    if adj.kind == "location":
        return [d for d in candidates if quadrant_label(d.bbox, parent_bbox) == adj.value]
    return _size_filter(adj.value, candidates)


def _observed(adj: Adjective, d: Detection, parent_bbox: BBox) -> str | None:
    if adj.kind == "color":
        return detection_color(d)
    if adj.kind == "location":
        return quadrant_label(d.bbox, parent_bbox)
    return None


# ---------------------------------------------------------------- execution


def _query(target: Target, registry: Registry) -> DetectQuery:
    if isinstance(target, AnyObject):
        return DetectQuery.objects()
    if isinstance(target, ObjectClass):
        return DetectQuery.objects(registry.expand(target.label))
    if is_text_target(target):
        return DetectQuery.text()
    raise ValueError(f"{target} cannot be detected directly")


def _value(target: Target, d: Detection) -> str:
    if isinstance(target, TextType):
        return " ".join(m.value for m in recognize(target.kind, d.label))
    return d.label


def run_chain(chain: FindChain, frame: SceneFrame, backend: DetectorBackend | None = None,
              registry: Registry | None = None) -> ChainResult:
    backend = backend or FixtureBackend()
    registry = registry or default_registry()
    levels: list[Item] = list(reversed(chain.items))
    prop = levels[-1].target if isinstance(levels[-1].target, Property) else None
    search = levels[:-1] if prop else levels
    if not search:
        raise ValueError("a property needs a parent item")
    for it in search:
        if isinstance(it.target, Property):
            raise ValueError("a property may only be the innermost item")

    res = ChainResult()
    frontier: list[tuple[Detection, ...]] = [()]
    for depth, item in enumerate(search):
        innermost = depth == len(levels) - 1
        query = _query(item.target, registry)
        survivors: list[tuple[Detection, ...]] = []
        before_adjective = 0
        observed = None
        for path in frontier:
            region = path[-1].bbox if path else frame.bbox
            try:
                found = backend.detect(frame, region, query)
            except Exception as e:
                raise InterpreterError(f"detector failed at level {depth} ({item.target.name}): {e}") from e
            used = {d.id for d in path}
            cands = [d for d in found if d.id not in used]
            if isinstance(item.target, TextType):
                hits = []
                for d in cands:
                    if recognize(item.target.kind, d.label):
                        hits.append(d)
                    elif innermost and d.label not in res.backup_texts:
                        res.backup_texts.append(d.label)
                cands = hits
            before_adjective += len(cands)
            if item.adjective is not None:
                kept = apply_adjective(item.adjective, cands, region, frame, res.warnings)
                if cands and not kept and observed is None:
                    observed = _observed(item.adjective, cands[0], region)
                cands = kept
            survivors.extend(path + (d,) for d in cands)
        if not survivors:
            res.failure_depth = depth
            if item.adjective is not None and before_adjective:
                res.adjective_miss = AdjectiveMiss(depth, item.adjective.value, observed)
            seen = []
            for path in frontier:
                if path and _det_noun(path[-1]) not in seen:
                    seen.append(_det_noun(path[-1]))
            res.partial_labels = seen
            return res
        frontier = survivors

    if prop is None:
        target = levels[-1].target
        res.matches = [ExecutionMatch(tuple(d.id for d in p), _value(target, p[-1])) for p in frontier]
    elif prop.kind == "color":
        res.matches = [ExecutionMatch(tuple(d.id for d in p), detection_color(p[-1]) or "unknown color")
                       for p in frontier]
    else:
        groups: dict[tuple[str, ...], int] = {}
        for p in frontier:
            key = tuple(d.id for d in p[:-1])
            groups[key] = groups.get(key, 0) + 1
        res.matches = [ExecutionMatch(k, str(n)) for k, n in groups.items()]
    return res


def run_program(p: Program, frame: SceneFrame, backend: DetectorBackend | None = None,
                registry: Registry | None = None, brief: bool = False) -> RunResult:
    results = [run_chain(c, frame, backend, registry) for c in p.chains]
    return RunResult(results, render_messages(results, p, frame, brief))


def run_sequence(p: Program, frames: Iterable[SceneFrame], backend: DetectorBackend | None = None,
                 registry: Registry | None = None, debounce_n: int = 5,
                 brief: bool = False) -> list[Announcement]:
    """Run ``p`` on each frame, dropping repeats of the last announcement.

    A repeated message is let through once every ``debounce_n`` frames so
    a listener knows the program is still running.
    """
    if debounce_n < 1:
        raise ValueError("debounce_n must be at least 1")
    out: list[Announcement] = []
    last = None
    repeats = 0
    for f in frames:
        try:
            text = run_program(p, f, backend, registry, brief).rendered
        except Exception as e:
            raise InterpreterError(f"frame {f.frame_id}: {e}") from e
        if text == last:
            repeats += 1
            if repeats < debounce_n:
                continue
        out.append(Announcement(f.frame_id, text))
        last = text
        repeats = 0
    return out


# ---------------------------------------------------------------- messages


def _det_noun(d: Detection) -> str:
    return d.label if d.kind == "object" else f"text {d.label}"


def _item_noun(item: Item) -> str:
    noun = target_noun(item.target)
    return f"{item.adjective.value} {noun}" if item.adjective else noun


_IRREGULAR = {"person": "people", "knife": "knives", "mouse": "mice", "skis": "skis"}


def _plural(noun: str, n: int) -> str:
    if n == 1:
        return noun
    if noun in _IRREGULAR:
        return _IRREGULAR[noun]
    if noun.endswith(("s", "x", "z", "ch", "sh")):
        return noun + "es"
    if noun.endswith("y") and noun[-2:-1] not in "aeiou":
        return noun[:-1] + "ies"
    return noun + "s"


def _success_segments(chain: FindChain, res: ChainResult, frame: SceneFrame, brief: bool) -> list[str]:
    inner = chain[0].target
    segs = []
    for m in res.matches:
        dets = [frame.get(i) for i in m.path]
        if isinstance(inner, Property) and inner.kind == "count":
            counted = target_noun(chain[1].target)
            phrase = f"{m.value} {_plural(counted, int(m.value))}"
            parent = dets[-1] if dets else None
            if brief or parent is None:
                segs.append(f"Found {phrase}")
            else:
                segs.append(f"Found {phrase} on {_det_noun(parent)}, {frame_position_phrase(parent, frame)}")
            continue
        if isinstance(inner, Property):
            phrase = f"color {m.value}"
            parent = dets[-1]
        else:
            if is_text_target(inner):
                noun = target_noun(inner)
                if brief:
                    segs.append(f"Found {noun}, {m.value}")
                    continue
                phrase = f"{noun} {m.value}"
            else:
                phrase = m.value
            parent = dets[-2] if len(dets) > 1 else None
        if brief:
            segs.append(f"Found {phrase}")
        elif parent is None:
            segs.append(f"Found {phrase}, {frame_position_phrase(dets[-1], frame)}")
        else:
            segs.append(f"Found {phrase} on {_det_noun(parent)}, {frame_position_phrase(parent, frame)}")
    return segs


def render_chain(chain: FindChain, res: ChainResult, frame: SceneFrame, brief: bool = False) -> str:
    if res.matches:
        segs = _success_segments(chain, res, frame, brief)
        return ", ".join([segs[0]] + ["f" + s[1:] for s in segs[1:]])
    levels = list(reversed(chain.items))
    depth = res.failure_depth or 0
    item = levels[depth]
    if depth == 0:
        noun = target_noun(item.target)
        miss = res.adjective_miss
        if miss is not None:
            seen = f"{miss.observed} {noun}" if miss.observed else noun
            return f"Found {seen}, no {miss.requested} {noun} visible"
        return f"No {noun} found"
    msg = f"Found {', '.join(res.partial_labels)}, no {_item_noun(item)}"
    if res.backup_texts:
        msg += "; text: " + ", ".join(res.backup_texts)
    return msg


def render_messages(results: list[ChainResult], p: Program, frame: SceneFrame, brief: bool = False) -> str:
    """One announcement for a whole program run; chains in program order."""
    parts = [render_chain(c, r, frame, brief) for c, r in zip(p.chains, results)]
    return ". ".join(parts) + "."
