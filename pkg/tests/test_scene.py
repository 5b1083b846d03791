import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from vizfilter.scene import (
    BBox,
    DetectQuery,
    FixtureBackend,
    SceneError,
    extract_dominant_colors,
    frame_position_phrase,
    load_scene,
    majority_contains,
    name_color,
    parse_scene,
    quadrant_label,
    read_ppm,
    scene_to_dict,
    write_ppm,
)


def test_half_overlap_is_not_majority():
    assert not majority_contains(BBox(0, 0, 10, 10), BBox(5, 0, 10, 10))
    assert majority_contains(BBox(0, 0, 10, 10), BBox(4, 0, 10, 10))


def test_quadrants_and_grid_line_ties():
    parent = BBox(0, 0, 90, 90)
    assert quadrant_label(BBox(0, 0, 10, 10), parent) == "upper left"
    assert quadrant_label(BBox(40, 40, 10, 10), parent) == "center middle"
    assert quadrant_label(BBox(80, 80, 10, 10), parent) == "lower right"
    # center exactly on x = 30 goes to the left column
    assert quadrant_label(BBox(25, 40, 10, 10), parent) == "left middle"
    assert quadrant_label(BBox(55, 40, 10, 10), parent) == "center middle"


def test_name_color():
    assert name_color([(250, 10, 10)]) == "red"
    assert name_color([(245, 245, 245)]) == "white"
    assert name_color([(10, 10, 10), (250, 10, 10)]) == "black"


def test_dominant_colors_from_raster():
    img = np.zeros((20, 20, 3), dtype=np.uint8)
    img[:, :] = (250, 10, 10)
    img[:5, :5] = (10, 10, 250)
    top = extract_dominant_colors(img, BBox(0, 0, 20, 20))
    assert name_color(top) == "red"
    assert len(top) == 2


def test_ppm_round_trip(tmp_path):
    img = (np.arange(4 * 3 * 3) % 256).astype(np.uint8).reshape(4, 3, 3)
    write_ppm(tmp_path / "a.ppm", img)
    assert np.array_equal(read_ppm(tmp_path / "a.ppm"), img)


def test_colors_filled_from_sibling_ppm(tmp_path):
    img = np.zeros((60, 100, 3), dtype=np.uint8)
    img[10:40, 10:60] = (250, 250, 250)
    write_ppm(tmp_path / "f1.ppm", img)
    scene = {"frames": [{"frame_id": "f1", "width": 100, "height": 60, "detections": [
        {"id": "b", "kind": "object", "label": "bus", "bbox": [10, 10, 50, 30], "confidence": 0.9}]}]}
    (tmp_path / "s.json").write_text(json.dumps(scene))
    d = load_scene(tmp_path / "s.json")[0].detections[0]
    assert name_color(d.dominant_colors) == "white"


@pytest.mark.parametrize("name", ["bad_bbox.json", "out_of_frame.json"])
def test_bad_fixtures_raise(fixtures_dir, name):
    with pytest.raises(SceneError):
        load_scene(fixtures_dir / name)


@pytest.mark.parametrize("data,fragment", [
    ({}, "frames"),
    ({"frames": [{"frame_id": "a", "width": 10, "height": 10, "detections": [{"id": "x"}]}]}, "detections[0]"),
    ({"frames": [{"frame_id": "a", "width": 10, "height": 10, "detections": [
        {"id": "x", "kind": "blob", "label": "y", "bbox": [0, 0, 1, 1], "confidence": 1}]}]}, "kind"),
])
def test_parse_errors_name_the_field(data, fragment):
    with pytest.raises(SceneError) as ei:
        parse_scene(data)
    assert fragment in str(ei.value)


def test_scene_dict_round_trip(fixtures_dir):
    frames = load_scene(fixtures_dir / "bus_two.json")
    assert parse_scene(scene_to_dict(frames)) == frames


def test_empty_scene(fixtures_dir):
    assert load_scene(fixtures_dir / "empty.json") == []


def test_fixture_backend_orders_by_confidence(fixtures_dir):
    f = load_scene(fixtures_dir / "bus_two.json")[0]
    found = FixtureBackend().detect(f, f.bbox, DetectQuery.objects(["bus"]))
    assert [d.confidence for d in found] == sorted((d.confidence for d in found), reverse=True)


def test_frame_position(fixtures_dir):
    f = load_scene(fixtures_dir / "bus_two.json")[0]
    assert [frame_position_phrase(d, f) for d in f.detections if d.label == "bus"] == [
        "left of frame", "right of frame"]


coords = st.integers(0, 200)
sizes = st.integers(1, 200)


@given(coords, coords, sizes, sizes, coords, coords, sizes, sizes, st.integers(2, 10))
def test_majority_scale_invariant(x, y, w, h, a, b, c, d, s):
    p, q = BBox(x, y, w, h), BBox(a, b, c, d)
    assert majority_contains(p, q) == majority_contains(p.scaled(s), q.scaled(s))


@given(coords, coords, sizes, sizes, st.data(), st.integers(2, 10))
def test_quadrant_scale_invariant(x, y, w, h, data, s):
    p = BBox(x, y, w, h)
    c = data.draw(st.integers(1, w))
    d = data.draw(st.integers(1, h))
    q = BBox(x + data.draw(st.integers(0, w - c)), y + data.draw(st.integers(0, h - d)), c, d)
    assert quadrant_label(q, p) == quadrant_label(q.scaled(s), p.scaled(s))
