"""Random frames and programs for sweeps and property tests.

Everything takes a ``random.Random`` so runs are reproducible from a seed.
Coordinates are integers, which keeps every geometric predicate exact under
integer scaling.
"""

from __future__ import annotations

import random
from dataclasses import replace

from .program import (
    Adjective,
    AnyObject,
    AnyText,
    FindChain,
    Item,
    ObjectClass,
    Program,
    Property,
    TextType,
)
from .registry import COLORS, LOCATIONS, SIZES
from .scene import REFERENCE_COLORS, BBox, Detection, SceneFrame, quadrant_label

OBJECT_LABELS = ("bus", "car", "sign", "person", "book", "license plate", "can", "jar")
TEXT_LABELS = ("73", "21", "Night Owl", "JAN 10 2024", "12:30", "a@b.com", "$4.99", "Route 9", "EXIT", "525")
TEXT_KINDS = ("number", "date", "time", "email", "money")
FRAME_SIZES = ((120, 90), (240, 180), (300, 300), (64, 48))


def _noisy(rng: random.Random, rgb) -> tuple[int, int, int]:
    return tuple(min(255, max(0, c + rng.randint(-12, 12))) for c in rgb)


def random_frame(rng: random.Random, max_detections: int = 10, frame_id: str = "r") -> SceneFrame:
    width, height = rng.choice(FRAME_SIZES)
    boxes: list[BBox] = []
    dets: list[Detection] = []
    for i in range(rng.randint(0, max_detections)):
        region = rng.choice([BBox(0, 0, width, height), *boxes])
        w = rng.randint(max(1, region.w // 6), max(1, region.w * 3 // 4))
        h = rng.randint(max(1, region.h // 6), max(1, region.h * 3 // 4))
        x = region.x + rng.randint(0, region.w - w)
        y = region.y + rng.randint(0, region.h - h)
        if rng.random() < 0.25:
            # nudge partly out of the parent to exercise the majority threshold
            x = min(max(0, x + rng.randint(-w, w)), width - w)
            y = min(max(0, y + rng.randint(-h, h)), height - h)
        box = BBox(x, y, w, h)
        boxes.append(box)
        kind = "text" if rng.random() < 0.35 else "object"
        label = rng.choice(TEXT_LABELS if kind == "text" else OBJECT_LABELS)
        colors, attrs = None, ()
        r = rng.random()
        if r < 0.55:
            colors = (_noisy(rng, rng.choice(REFERENCE_COLORS)[1]),)
        elif r < 0.85:
            attrs = (rng.choice(COLORS),)
        dets.append(Detection(f"d{i}", kind, label, box, rng.choice((0.5, 0.7, 0.9)), colors, attrs))
    return SceneFrame(frame_id, width, height, tuple(dets))


def random_adjective(rng: random.Random) -> Adjective:
    pool = rng.choice((COLORS, LOCATIONS, SIZES))
    return Adjective(rng.choice(pool))


def _random_target(rng: random.Random):
    r = rng.random()
    if r < 0.5:
        return ObjectClass(rng.choice(OBJECT_LABELS + ("grocery product",)))
    if r < 0.6:
        return AnyObject()
    if r < 0.75:
        return AnyText()
    return TextType(rng.choice(TEXT_KINDS))


def random_chain(rng: random.Random, max_depth: int = 3, adjective_p: float = 0.35) -> FindChain:
    depth = rng.randint(1, max_depth)
    items = []
    for i in range(depth):
        if i == 0 and depth >= 2 and rng.random() < 0.15:
            items.append(Item(Property(rng.choice(("color", "count")))))
            continue
        adj = random_adjective(rng) if rng.random() < adjective_p else None
        items.append(Item(_random_target(rng), adj))
    return FindChain(tuple(items))


def random_program(rng: random.Random, max_chains: int = 2, max_depth: int = 3) -> Program:
    return Program(tuple(random_chain(rng, max_depth) for _ in range(rng.randint(1, max_chains))))


def add_consistent_hints(frame: SceneFrame, parents: dict[str, str | None], rng: random.Random) -> SceneFrame:
    """Give some detections an adjective hint that the frame data agrees with.

    Color hints repeat the detection's own color; location hints are
    measured against the detection's parent in ``parents``.
    """
    from .interpreter import detection_color

    by_id = {d.id: d for d in frame.detections}
    out = []
    for d in frame.detections:
        r = rng.random()
        hint = None
        if r < 0.3:
            hint = detection_color(d)
        elif r < 0.5:
            p = parents.get(d.id)
            region = by_id[p].bbox if p else frame.bbox
            hint = quadrant_label(d.bbox, region)
        out.append(replace(d, attributes=(hint, *d.attributes)) if hint else d)
    return replace(frame, detections=tuple(out))
