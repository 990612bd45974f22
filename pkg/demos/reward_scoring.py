"""Scoring model responses with rule-based verifiers."""

from vlplan.rewards import (
    Box,
    boxed_reward,
    check_think_format,
    count_from_points,
    format_reward,
    grounding_reward,
    match_boxes,
    normalize_box,
    parse_bboxes,
)

response = "<think>the braids are in the top left</think><bbox>202 82 432 188</bbox>"
print(check_think_format(response))
print("format reward:", format_reward(response).reward, "| without tags:", format_reward("just an answer").reward)

gt = normalize_box((130, 40, 280, 95), width=640, height=500)
print("ground truth in [0, 999] coords:", gt)
print("grounding IoU reward:", round(grounding_reward(response, gt, require_think=True).reward, 3))

print("count:", count_from_points("<point>766 708</point><point>818 471</point><point>828 446</point>"))

print("boxed:", boxed_reward("<think>...</think>so x = \\boxed{\\frac{1}{2}}", "\\frac{1}{2}", require_think=True))
print("numeric match:", boxed_reward("\\boxed{2.0}", "2").reward)

preds = parse_bboxes("<bbox>0 0 10 10</bbox><bbox>50 50 60 60</bbox>")
gts = [Box(0, 0, 10, 10), Box(20, 20, 30, 30)]
print("multi-object P/R/F1:", match_boxes(preds, gts, 0.5))
