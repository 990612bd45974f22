"""Rule-based verifiers for model responses.

Token grammars handled here::

    <think>thought</think>solution
    <bbox>x1 y1 x2 y2</bbox>
    <point>x y</point>
    \\boxed{answer}

Coordinates are integers normalized to ``[0, 999]``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, NamedTuple, Optional, Sequence

COORD_MAX = 999

THINK_OPEN = "<think>"
THINK_CLOSE = "</think>"
BOXED = "\\boxed{"

_BBOX_RE = re.compile(r"<bbox>(.*?)</bbox>", re.DOTALL)
_POINT_RE = re.compile(r"<point>(.*?)</point>", re.DOTALL)
_UINT_RE = re.compile(r"\d+")


class Box(NamedTuple):
    x1: int
    y1: int
    x2: int
    y2: int

    @property
    def area(self) -> int:
        return (self.x2 - self.x1) * (self.y2 - self.y1)


class Point(NamedTuple):
    x: int
    y: int


class MalformedSpan(NamedTuple):
    start: int
    text: str
    reason: str


class TagScan(NamedTuple):
    valid: list
    malformed: list[MalformedSpan]


class FormatParse(NamedTuple):
    compliant: bool
    thought: str
    solution: str


@dataclass(frozen=True)
class RewardReport:
    reward: float
    compliant: bool
    payload: Any = None
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {"reward": self.reward, "compliant": self.compliant}
        if isinstance(self.payload, list):
            out["payload"] = [list(p) if isinstance(p, tuple) else p for p in self.payload]
        else:
            out["payload"] = self.payload
        out.update(self.details)
        return out


def check_think_format(text: str) -> FormatParse:
    if not text.startswith(THINK_OPEN):
        return FormatParse(False, "", text)
    end = text.find(THINK_CLOSE)
    if end < 0:
        return FormatParse(False, "", text)
    return FormatParse(True, text[len(THINK_OPEN):end], text[end + len(THINK_CLOSE):])


def _parse_ints(body: str, arity: int) -> tuple[Optional[list[int]], str]:
    fields = body.split()
    if len(fields) != arity:
        return None, f"expected {arity} integers, got {len(fields)} fields"
    if not all(_UINT_RE.fullmatch(f) for f in fields):
        return None, "non-integer coordinate"
    vals = [int(f) for f in fields]
    if any(v > COORD_MAX for v in vals):
        return None, f"coordinate outside [0, {COORD_MAX}]"
    return vals, ""


def scan_bboxes(text: str) -> TagScan:
    boxes, bad = [], []
    for m in _BBOX_RE.finditer(text):
        vals, why = _parse_ints(m.group(1), 4)
        if vals is not None and not (vals[0] < vals[2] and vals[1] < vals[3]):
            vals, why = None, "degenerate box (need x1 < x2 and y1 < y2)"
        if vals is None:
            bad.append(MalformedSpan(m.start(), m.group(0), why))
        else:
            boxes.append(Box(*vals))
    return TagScan(boxes, bad)


def scan_points(text: str) -> TagScan:
    points, bad = [], []
    for m in _POINT_RE.finditer(text):
        vals, why = _parse_ints(m.group(1), 2)
        if vals is None:
            bad.append(MalformedSpan(m.start(), m.group(0), why))
        else:
            points.append(Point(*vals))
    return TagScan(points, bad)


def parse_bboxes(text: str) -> list[Box]:
    """Well-formed ``<bbox>`` spans in order; malformed ones are skipped.

    Use :func:`scan_bboxes` to also get the rejected spans.
    """
    return scan_bboxes(text).valid


def parse_points(text: str) -> list[Point]:
    return scan_points(text).valid


def count_from_points(text: str) -> int:
    return len(parse_points(text))


def iou(a: Sequence[float], b: Sequence[float]) -> float:
    ix = min(a[2], b[2]) - max(a[0], b[0])
    iy = min(a[3], b[3]) - max(a[1], b[1])
    inter = max(0, ix) * max(0, iy)
    union = (a[2] - a[0]) * (a[3] - a[1]) + (b[2] - b[0]) * (b[3] - b[1]) - inter
    if union <= 0:
        return 0.0
    return inter / union


def _solution_of(text: str, require_think: bool) -> Optional[str]:
    if not require_think:
        return text
    fmt = check_think_format(text)
    return fmt.solution if fmt.compliant else None


def format_reward(text: str) -> RewardReport:
    fmt = check_think_format(text)
    return RewardReport(
        reward=1.0 if fmt.compliant else 0.0,
        compliant=fmt.compliant,
        payload={"thought": fmt.thought, "solution": fmt.solution} if fmt.compliant else None,
    )


def grounding_reward(
    pred_text: str,
    gt: Sequence[int],
    select: str = "first",
    require_think: bool = False,
) -> RewardReport:
    """IoU between a predicted box and the ground-truth box.

    ``select="first"`` scores the first valid box in the response;
    ``select="best"`` scores the best-overlapping one instead.
    """
    if select not in ("first", "best"):
        raise ValueError(f"select must be 'first' or 'best', got {select!r}")
    solution = _solution_of(pred_text, require_think)
    boxes = parse_bboxes(solution) if solution is not None else []
    if not boxes:
        return RewardReport(0.0, False, [])
    if select == "first":
        reward = iou(boxes[0], gt)
    else:
        reward = max(iou(b, gt) for b in boxes)
    return RewardReport(reward, True, boxes)


def point_reward(pred_text: str, gt: Sequence[int], require_think: bool = False) -> RewardReport:
    """1.0 when the first valid point falls inside the ground-truth box (edges count)."""
    solution = _solution_of(pred_text, require_think)
    points = parse_points(solution) if solution is not None else []
    if not points:
        return RewardReport(0.0, False, [])
    x, y = points[0]
    inside = gt[0] <= x <= gt[2] and gt[1] <= y <= gt[3]
    return RewardReport(1.0 if inside else 0.0, True, points)


def match_boxes(
    preds: Sequence[Sequence[int]],
    gts: Sequence[Sequence[int]],
    iou_threshold: float = 0.5,
) -> dict[str, float]:
    """Greedy one-to-one matching by descending IoU, then precision/recall/F1."""
    if not 0 < iou_threshold <= 1:
        raise ValueError(f"iou_threshold must be in (0, 1], got {iou_threshold}")
    pairs = []
    for i, p in enumerate(preds):
        for j, g in enumerate(gts):
            v = iou(p, g)
            if v >= iou_threshold:
                pairs.append((-v, i, j))
    pairs.sort()
    used_p, used_g = set(), set()
    tp = 0
    for _, i, j in pairs:
        if i in used_p or j in used_g:
            continue
        used_p.add(i)
        used_g.add(j)
        tp += 1
    return prf1(tp, len(preds), len(gts))


def prf1(tp: int, n_pred: int, n_gt: int) -> dict[str, float]:
    precision = tp / n_pred if n_pred else 0.0
    recall = tp / n_gt if n_gt else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return {"precision": precision, "recall": recall, "f1": f1, "tp": tp}


def extract_boxed(text: str) -> Optional[str]:
    """Content of the last ``\\boxed{...}``, or ``None`` if absent or unbalanced."""
    start = text.rfind(BOXED)
    if start < 0:
        return None
    depth = 1
    for pos in range(start + len(BOXED), len(text)):
        ch = text[pos]
        if ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
            if depth == 0:
                return text[start + len(BOXED):pos]
    return None


def _normalize_answer(s: str) -> str:
    s = " ".join(s.strip().lower().split())
    return s.rstrip(".").rstrip()


def _as_number(s: str) -> Optional[Fraction]:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        return None


def answer_match(pred: Optional[str], gt: str) -> bool:
    if pred is None:
        return False
    a, b = _normalize_answer(pred), _normalize_answer(gt)
    na, nb = _as_number(a), _as_number(b)
    if na is not None and nb is not None:
        return na == nb
    return a == b


def boxed_reward(pred_text: str, gt: str, require_think: bool = False) -> RewardReport:
    """1.0 when the last boxed answer string-matches ``gt``."""
    solution = _solution_of(pred_text, require_think)
    answer = extract_boxed(solution) if solution is not None else None
    if answer is None:
        return RewardReport(0.0, False, None)
    return RewardReport(1.0 if answer_match(answer, gt) else 0.0, True, answer)


def normalize_coord(x: float, extent: float) -> int:
    if extent < 1:
        raise ValueError(f"extent must be >= 1, got {extent}")
    if not 0 <= x <= extent:
        raise ValueError(f"coordinate {x} outside [0, {extent}]")
    v = COORD_MAX * x / extent
    return min(COORD_MAX, max(0, math.floor(v + 0.5)))


def denormalize_coord(n: int, extent: float) -> float:
    if extent < 1:
        raise ValueError(f"extent must be >= 1, got {extent}")
    return n * extent / COORD_MAX


def normalize_box(box: Sequence[float], width: float, height: float) -> Box:
    x1, y1, x2, y2 = box
    return Box(
        normalize_coord(x1, width),
        normalize_coord(y1, height),
        normalize_coord(x2, width),
        normalize_coord(y2, height),
    )
