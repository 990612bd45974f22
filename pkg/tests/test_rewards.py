import random

import pytest
from hypothesis import given, strategies as st

from vlplan.rewards import (
    Box,
    Point,
    answer_match,
    boxed_reward,
    check_think_format,
    count_from_points,
    denormalize_coord,
    extract_boxed,
    format_reward,
    grounding_reward,
    iou,
    match_boxes,
    normalize_box,
    normalize_coord,
    parse_bboxes,
    parse_points,
    point_reward,
    scan_bboxes,
    scan_points,
)

from oracles import boxed_by_descent, f1_from_counts, optimal_match_tp

COUNTING_RESPONSE = (
    "<point>766 708</point><point>818 471</point><point>828 446</point>\n"
    "<point>856 468</point><point>839 504</point><point>807 521</point><point>815 556</point>"
    "<point>870 534</point><point>909 510</point><point>930 446</point><point>928 546</point>"
    "<point>753 507</point><point>793 604</point><point>825 597</point><point>879 589</point>"
    "<point>916 594</point><point>806 633</point><point>840 641</point><point>856 615</point>"
    "<point>893 643</point><point>922 629</point><point>968 626</point><point>800 668</point>"
    "<point>834 681</point><point>878 688</point><point>849 714</point><point>883 761</point>\n"
    "There are 27 cherry tomatoes in the picture"
)


def test_think_format():
    assert check_think_format("<think>a</think>b") == (True, "a", "b")
    assert not check_think_format("b").compliant
    assert check_think_format("<think>x</think></think>y") == (True, "x", "</think>y")
    assert not check_think_format("<think>never closed").compliant
    assert not check_think_format(" <think>a</think>b").compliant


def test_format_reward_zero_when_noncompliant():
    assert format_reward("b").reward == 0.0
    assert format_reward("<think>...</think>ok").reward == 1.0


def test_parse_bboxes():
    assert parse_bboxes("<think>...</think><bbox>202 82 432 188</bbox>") == [Box(202, 82, 432, 188)]
    assert parse_bboxes("") == []
    scan = scan_bboxes("<bbox>5 5 4 9</bbox><bbox>1 2 3 4</bbox>")
    assert scan.valid == [Box(1, 2, 3, 4)]
    assert len(scan.malformed) == 1 and scan.malformed[0].start == 0


@pytest.mark.parametrize(
    "span", ["<bbox>1 2 3</bbox>", "<bbox>1 2 3 4 5</bbox>", "<bbox>1 2 3.5 4</bbox>",
             "<bbox>1 2 1000 4</bbox>", "<bbox>-1 2 3 4</bbox>", "<bbox>1 4 3 4</bbox>"],
)
def test_malformed_bbox_spans(span):
    scan = scan_bboxes(span)
    assert scan.valid == [] and len(scan.malformed) == 1


def test_parse_points():
    assert parse_points("<point>766 708</point>") == [Point(766, 708)]
    assert parse_points("") == []
    scan = scan_points("<point>1000 0</point>")
    assert scan.valid == [] and "outside" in scan.malformed[0].reason


def test_count_from_points():
    assert count_from_points(COUNTING_RESPONSE) == 27
    assert count_from_points("") == 0
    text = "<point>1 1</point><point>2 2</point><point>3 3</point><point>1 2 3</point>"
    assert count_from_points(text) == 3


def test_iou_examples():
    assert iou((1, 2, 30, 40), (1, 2, 30, 40)) == 1.0
    assert iou((0, 0, 10, 10), (10, 10, 20, 20)) == 0.0
    assert iou((0, 0, 10, 10), (5, 0, 15, 10)) == pytest.approx(50 / 150, abs=1e-15)


boxes = st.tuples(st.integers(0, 998), st.integers(0, 998), st.integers(1, 999), st.integers(1, 999)).filter(
    lambda b: b[0] < b[2] and b[1] < b[3]
)


@given(boxes, boxes)
def test_iou_properties(a, b):
    v = iou(a, b)
    assert 0.0 <= v <= 1.0
    assert v == iou(b, a)
    assert iou(a, a) == 1.0


def test_grounding_reward():
    gt = Box(0, 0, 10, 10)
    assert grounding_reward("<bbox>0 0 10 10</bbox>", gt).reward == 1.0
    r = grounding_reward("no box here", gt)
    assert r.reward == 0.0 and not r.compliant
    r = grounding_reward("<bbox>5 0 15 10</bbox><bbox>0 0 10 10</bbox>", gt)
    assert r.reward == pytest.approx(1 / 3)
    assert grounding_reward("<bbox>5 0 15 10</bbox><bbox>0 0 10 10</bbox>", gt, select="best").reward == 1.0


def test_grounding_reward_require_think():
    gt = Box(0, 0, 10, 10)
    assert grounding_reward("<bbox>0 0 10 10</bbox>", gt, require_think=True).reward == 0.0
    assert grounding_reward("<think>hm</think><bbox>0 0 10 10</bbox>", gt, require_think=True).reward == 1.0
    # boxes inside the thought do not count
    assert grounding_reward("<think><bbox>0 0 10 10</bbox></think>", gt, require_think=True).reward == 0.0


def test_point_reward():
    gt = Box(100, 100, 200, 200)
    assert point_reward("<point>150 150</point>", gt).reward == 1.0
    assert point_reward("<point>250 150</point><point>150 150</point>", gt).reward == 0.0
    assert not point_reward("nothing", gt).compliant


def test_match_boxes_examples():
    same = [(0, 0, 10, 10), (20, 20, 30, 30)]
    assert match_boxes(same, same)["f1"] == 1.0
    r = match_boxes([(0, 0, 10, 10)], same, 0.5)
    assert (r["precision"], r["recall"]) == (1.0, 0.5)
    assert r["f1"] == pytest.approx(2 / 3)
    r = match_boxes([], same)
    assert (r["precision"], r["recall"], r["f1"]) == (0.0, 0.0, 0.0)
    with pytest.raises(ValueError):
        match_boxes([], [], 0)


def _rand_box(rng):
    x1, y1 = rng.randint(0, 60), rng.randint(0, 60)
    return (x1, y1, x1 + rng.randint(1, 40), y1 + rng.randint(1, 40))


def test_match_boxes_vs_exhaustive():
    rng = random.Random(8)
    for _ in range(1500):
        preds = [_rand_box(rng) for _ in range(rng.randint(0, 4))]
        gts = [_rand_box(rng) for _ in range(rng.randint(0, 4))]
        thr = rng.choice([0.1, 0.3, 0.5])
        got = match_boxes(preds, gts, thr)
        best = f1_from_counts(optimal_match_tp(preds, gts, thr), len(preds), len(gts))
        assert got["f1"] <= best + 1e-12


def test_extract_boxed():
    assert extract_boxed("so the answer is \\boxed{42}") == "42"
    assert extract_boxed("\\boxed{\\frac{1}{2}}") == "\\frac{1}{2}"
    assert extract_boxed("no box") is None
    assert extract_boxed("\\boxed{1} then \\boxed{2}") == "2"
    assert extract_boxed("\\boxed{1} then \\boxed{2") is None
    assert extract_boxed("\\boxed{}") == ""


def test_extract_boxed_vs_descent_parser():
    rng = random.Random(13)
    alphabet = ["{", "}", "a", "1", " ", "\\boxed{", "\\frac"]
    for _ in range(10000):
        text = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 20)))
        assert extract_boxed(text) == boxed_by_descent(text), text


@pytest.mark.parametrize(
    "pred, gt, ok",
    [("  42 ", "42", True), ("2.0", "2", True), ("potato", "tomato", False), ("Potato.", "potato", True),
     ("Travel  the seven\nseas", "travel the seven seas", True), ("1/2", "0.5", True), ("3", "3.01", False)],
)
def test_answer_match(pred, gt, ok):
    assert answer_match(pred, gt) is ok


def test_boxed_reward():
    assert boxed_reward("<think>x</think>\\boxed{42}", "42", require_think=True).reward == 1.0
    assert boxed_reward("\\boxed{42}", "42", require_think=True).reward == 0.0
    assert boxed_reward("\\boxed{41}", "42").reward == 0.0
    assert not boxed_reward("42", "42").compliant


@pytest.mark.parametrize("x, extent, n", [(0, 640, 0), (640, 640, 999), (500, 1000, 500), (1, 1, 999)])
def test_normalize_coord(x, extent, n):
    assert normalize_coord(x, extent) == n


def test_normalize_coord_rejects():
    with pytest.raises(ValueError):
        normalize_coord(11, 10)
    with pytest.raises(ValueError):
        normalize_coord(-1, 10)


@given(st.floats(1, 10000), st.floats(0, 1))
def test_coord_round_trip(extent, frac):
    x = extent * frac
    assert abs(x - denormalize_coord(normalize_coord(x, extent), extent)) <= extent / 1998 + 1e-9


def test_normalize_box():
    assert normalize_box((0, 0, 640, 480), 640, 480) == Box(0, 0, 999, 999)
