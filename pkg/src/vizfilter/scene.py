"""Annotated camera frames, box geometry, color naming and the fixture detector."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path
from typing import Iterable, Protocol, Sequence

import numpy as np

from .registry import COLORS, LOCATIONS

log = logging.getLogger(__name__)

RGB = tuple[int, int, int]


@dataclass(frozen=True)
class BBox:
    """Axis-aligned box, top-left origin, in pixels."""

    x: float
    y: float
    w: float
    h: float

    @property
    def area(self) -> float:
        return self.w * self.h

    def intersection_area(self, other: "BBox") -> float:
        ix = min(self.x + self.w, other.x + other.w) - max(self.x, other.x)
        iy = min(self.y + self.h, other.y + other.h) - max(self.y, other.y)
        if ix <= 0 or iy <= 0:
            return 0
        return ix * iy

    def scaled(self, s: float) -> "BBox":
        return BBox(self.x * s, self.y * s, self.w * s, self.h * s)

    def as_list(self) -> list:
        return [self.x, self.y, self.w, self.h]


@dataclass(frozen=True)
class Detection:
    id: str
    kind: str  # "object" | "text"
    label: str
    bbox: BBox
    confidence: float = 1.0
    dominant_colors: tuple[RGB, ...] | None = None
    attributes: tuple[str, ...] = ()


@dataclass(frozen=True)
class SceneFrame:
    frame_id: str
    width: float
    height: float
    detections: tuple[Detection, ...] = ()

    @property
    def bbox(self) -> BBox:
        return BBox(0, 0, self.width, self.height)

    def get(self, det_id: str) -> Detection:
        for d in self.detections:
            if d.id == det_id:
                return d
        raise KeyError(det_id)

    def scaled(self, s: float) -> "SceneFrame":
        return replace(
            self,
            width=self.width * s,
            height=self.height * s,
            detections=tuple(replace(d, bbox=d.bbox.scaled(s)) for d in self.detections),
        )


class SceneError(ValueError):
    pass


# ---------------------------------------------------------------- geometry


def majority_contains(parent: BBox, child: BBox) -> bool:
    """True when more than half of ``child``'s area lies inside ``parent``."""
    return 2 * parent.intersection_area(child) > child.area


def _third(offset2: float, extent: float) -> int:
    # offset2 is twice the center's offset from the parent edge; an exact
    # tie on a grid line goes to the lower cell
    if 3 * offset2 <= 2 * extent:
        return 0
    if 3 * offset2 <= 4 * extent:
        return 1
    return 2


def quadrant_label(child: BBox, parent: BBox) -> str:
    """Which cell of the parent's 3x3 grid holds the child's center."""
    dx2 = 2 * child.x + child.w - 2 * parent.x
    dy2 = 2 * child.y + child.h - 2 * parent.y
    if not (0 <= dx2 <= 2 * parent.w and 0 <= dy2 <= 2 * parent.h):
        raise ValueError("child center lies outside the parent box")
    return LOCATIONS[3 * _third(dy2, parent.h) + _third(dx2, parent.w)]


def frame_position_phrase(d: Detection, f: SceneFrame) -> str:
    col = _third(2 * d.bbox.x + d.bbox.w, f.width)
    return ("left of frame", "center of frame", "right of frame")[col]


# ---------------------------------------------------------------- color


def _load_reference_colors() -> tuple[tuple[str, RGB], ...]:
    data = json.loads(resources.files("vizfilter").joinpath("data/colors.json").read_text())
    table = tuple((name, tuple(rgb)) for name, rgb in data["colors"])
    assert [n for n, _ in table] == list(COLORS)
    return table


REFERENCE_COLORS = _load_reference_colors()


def name_color(rgb_list: Sequence[Sequence[int]]) -> str:
    """Name of the reference color nearest to the most frequent color."""
    if not rgb_list:
        raise ValueError("no colors given")
    r, g, b = rgb_list[0]
    best, best_d = None, None
    for name, (cr, cg, cb) in REFERENCE_COLORS:
        d = (r - cr) ** 2 + (g - cg) ** 2 + (b - cb) ** 2
        if best_d is None or d < best_d:
            best, best_d = name, d
    return best


def extract_dominant_colors(raster: np.ndarray, bbox: BBox, top: int = 3) -> list[RGB]:
    """Most frequent 3-bit-per-channel buckets inside ``bbox``, as bucket centers.

    Ties between equally frequent buckets go to the lower bucket index.
    """
    x0, y0 = int(round(bbox.x)), int(round(bbox.y))
    x1, y1 = int(round(bbox.x + bbox.w)), int(round(bbox.y + bbox.h))
    h, w = raster.shape[:2]
    if x0 < 0 or y0 < 0 or x1 > w or y1 > h or x1 <= x0 or y1 <= y0:
        raise ValueError(f"bbox {bbox} outside {w}x{h} raster")
    q = raster[y0:y1, x0:x1, :3].astype(np.int64) >> 5
    idx = (q[..., 0] << 6) | (q[..., 1] << 3) | q[..., 2]
    counts = np.bincount(idx.ravel(), minlength=512)
    order = sorted(np.nonzero(counts)[0], key=lambda k: (-counts[k], k))[:top]
    return [(int((k >> 6) * 32 + 16), int(((k >> 3) & 7) * 32 + 16), int((k & 7) * 32 + 16)) for k in order]


def read_ppm(path: str | Path) -> np.ndarray:
    """Read a binary (P6) PPM with maxval 255 into an HxWx3 uint8 array."""
    data = Path(path).read_bytes()
    fields: list[bytes] = []
    pos = 0
    while len(fields) < 4:
        while pos < len(data) and data[pos:pos + 1].isspace():
            pos += 1
        if data[pos:pos + 1] == b"#":
            while pos < len(data) and data[pos:pos + 1] != b"\n":
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos:pos + 1].isspace():
            pos += 1
        fields.append(data[start:pos])
    if fields[0] != b"P6":
        raise SceneError(f"{path}: not a binary PPM")
    w, h, maxval = (int(v) for v in fields[1:])
    if maxval != 255:
        raise SceneError(f"{path}: only maxval 255 is supported")
    pixels = np.frombuffer(data[pos + 1:pos + 1 + w * h * 3], dtype=np.uint8)
    if pixels.size != w * h * 3:
        raise SceneError(f"{path}: truncated pixel data")
    return pixels.reshape(h, w, 3)


def write_ppm(path: str | Path, raster: np.ndarray) -> None:
    h, w = raster.shape[:2]
    Path(path).write_bytes(b"P6\n%d %d\n255\n" % (w, h) + np.ascontiguousarray(raster[..., :3], dtype=np.uint8).tobytes())


# ---------------------------------------------------------------- loading


def _req(d: dict, key: str, where: str):
    if key not in d:
        raise SceneError(f"{where}.{key}: missing")
    return d[key]


def _num(v, where: str) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise SceneError(f"{where}: expected a number")
    return v


def _parse_detection(d, where: str, width: float, height: float) -> Detection:
    if not isinstance(d, dict):
        raise SceneError(f"{where}: expected an object")
    det_id = _req(d, "id", where)
    if not isinstance(det_id, str) or not det_id:
        raise SceneError(f"{where}.id: expected a non-empty string")
    kind = _req(d, "kind", where)
    if kind not in ("object", "text"):
        raise SceneError(f"{where}.kind: expected 'object' or 'text'")
    label = _req(d, "label", where)
    if not isinstance(label, str):
        raise SceneError(f"{where}.label: expected a string")
    raw = _req(d, "bbox", where)
    if not isinstance(raw, list) or len(raw) != 4:
        raise SceneError(f"{where}.bbox: expected [x, y, w, h]")
    bbox = BBox(*(_num(v, f"{where}.bbox[{i}]") for i, v in enumerate(raw)))
    if bbox.w <= 0 or bbox.h <= 0:
        raise SceneError(f"{where}.bbox: width and height must be positive")
    if bbox.x < 0 or bbox.y < 0 or bbox.x + bbox.w > width or bbox.y + bbox.h > height:
        raise SceneError(f"{where}.bbox: box {raw} lies outside the {width}x{height} frame")
    conf = _num(d.get("confidence", 1.0), f"{where}.confidence")
    if not 0 <= conf <= 1:
        raise SceneError(f"{where}.confidence: must be within [0, 1]")
    colors = d.get("dominant_colors")
    if colors is not None:
        if not isinstance(colors, list) or not all(
            isinstance(c, list) and len(c) == 3 and all(isinstance(v, int) and 0 <= v <= 255 for v in c)
            for c in colors
        ):
            raise SceneError(f"{where}.dominant_colors: expected a list of [r, g, b] byte triples")
        colors = tuple(tuple(c) for c in colors) or None
    attrs = d.get("attributes", [])
    if not isinstance(attrs, list) or not all(isinstance(a, str) for a in attrs):
        raise SceneError(f"{where}.attributes: expected a list of strings")
    label = " ".join(label.lower().split()) if kind == "object" else label
    return Detection(det_id, kind, label, bbox, conf, colors, tuple(a.lower() for a in attrs))


def parse_scene(data, base_dir: Path | None = None) -> list[SceneFrame]:
    if not isinstance(data, dict):
        raise SceneError("top level: expected an object")
    frames_raw = _req(data, "frames", "$")
    if not isinstance(frames_raw, list):
        raise SceneError("$.frames: expected a list")
    frames = []
    for fi, fr in enumerate(frames_raw):
        where = f"$.frames[{fi}]"
        if not isinstance(fr, dict):
            raise SceneError(f"{where}: expected an object")
        frame_id = str(_req(fr, "frame_id", where))
        width = _num(_req(fr, "width", where), f"{where}.width")
        height = _num(_req(fr, "height", where), f"{where}.height")
        if width <= 0 or height <= 0:
            raise SceneError(f"{where}: width and height must be positive")
        dets_raw = fr.get("detections", [])
        if not isinstance(dets_raw, list):
            raise SceneError(f"{where}.detections: expected a list")
        dets = [_parse_detection(d, f"{where}.detections[{di}]", width, height) for di, d in enumerate(dets_raw)]
        ids = [d.id for d in dets]
        if len(set(ids)) != len(ids):
            raise SceneError(f"{where}.detections: duplicate detection ids")
        if base_dir is not None:
            ppm = base_dir / f"{frame_id}.ppm"
            if ppm.exists():
                dets = _fill_colors(dets, read_ppm(ppm))
        frames.append(SceneFrame(frame_id, width, height, tuple(dets)))
    return frames


def _fill_colors(dets: list[Detection], raster: np.ndarray) -> list[Detection]:
    # colors given in the annotation take precedence over the raster
    return [d if d.dominant_colors else replace(d, dominant_colors=tuple(extract_dominant_colors(raster, d.bbox)))
            for d in dets]


def load_scene(path: str | Path) -> list[SceneFrame]:
    path = Path(path)
    if not path.exists():
        raise SceneError(f"{path}: no such file")
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as e:
        raise SceneError(f"{path}: malformed JSON: {e}") from None
    return parse_scene(data, path.parent)


def scene_to_dict(frames: Iterable[SceneFrame]) -> dict:
    out = []
    for f in frames:
        dets = []
        for d in f.detections:
            e = {"id": d.id, "kind": d.kind, "label": d.label, "bbox": d.bbox.as_list(), "confidence": d.confidence}
            if d.dominant_colors:
                e["dominant_colors"] = [list(c) for c in d.dominant_colors]
            if d.attributes:
                e["attributes"] = list(d.attributes)
            dets.append(e)
        out.append({"frame_id": f.frame_id, "width": f.width, "height": f.height, "detections": dets})
    return {"frames": out}


# ---------------------------------------------------------------- detectors


@dataclass(frozen=True)
class DetectQuery:
    """What to look for: objects (optionally of given classes) or text."""

    kind: str  # "object" | "text"
    classes: frozenset[str] | None = None

    @classmethod
    def objects(cls, classes: Iterable[str] | None = None) -> "DetectQuery":
        return cls("object", None if classes is None else frozenset(c.lower() for c in classes))

    @classmethod
    def text(cls) -> "DetectQuery":
        return cls("text")


class DetectorBackend(Protocol):
    def detect(self, frame: SceneFrame, region: BBox, query: DetectQuery) -> list[Detection]:
        ...


def detection_order(d: Detection):
    return (-d.confidence, d.id)


@dataclass
class FixtureBackend:
    """Serves detections straight from the annotation file."""

    calls: int = field(default=0, repr=False)

    def detect(self, frame: SceneFrame, region: BBox, query: DetectQuery) -> list[Detection]:
        self.calls += 1
        out = [
            d for d in frame.detections
            if d.kind == query.kind
            and (query.classes is None or d.label in query.classes)
            and majority_contains(region, d.bbox)
        ]
        return sorted(out, key=detection_order)


def fixture_detect(frame: SceneFrame, region: BBox, query: DetectQuery) -> list[Detection]:
    return FixtureBackend().detect(frame, region, query)
