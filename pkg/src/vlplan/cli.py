"""``vlplan`` command line.

Every subcommand reads JSONL manifests (or flags) and prints one JSON object
with sorted keys. Exit codes: 0 ok, 2 bad arguments or config, 3 bad input
data.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Any, Callable, Optional, Sequence

from . import balance, datamix, imgproc, packer, rewards, scalefit, videoplan
from .config import Config, ConfigError, load_config

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3


class ManifestError(ValueError):
    """Input data violates the manifest schema."""


class UsageError(ValueError):
    pass


def dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, allow_nan=False)


# -- manifest reading -------------------------------------------------------

def read_manifest(path: str, stdin=None) -> list[tuple[int, dict]]:
    """Parse a JSONL file into ``(line_number, object)`` pairs. ``-`` is stdin."""
    try:
        if path == "-":
            text = (stdin or sys.stdin).read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except UnicodeDecodeError as exc:
        raise ManifestError(f"{path}: not valid UTF-8 ({exc.reason})") from None
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None

    rows = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except ValueError as exc:
            raise ManifestError(f"line {lineno}: invalid JSON ({exc})") from None
        if not isinstance(obj, dict):
            raise ManifestError(f"line {lineno}: expected a JSON object")
        rows.append((lineno, obj))
    return rows


def _get(obj: dict, key: str, lineno: int, check: Callable[[Any], bool], what: str, default=...):
    if key not in obj or obj[key] is None:
        if default is not ...:
            return default
        raise ManifestError(f"line {lineno}: missing field {key!r}")
    v = obj[key]
    if not check(v):
        raise ManifestError(f"line {lineno}: field {key!r} must be {what}, got {v!r}")
    return v


def _is_int(v) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


def _is_num(v) -> bool:
    return (_is_int(v) or isinstance(v, float)) and math.isfinite(v)


def _pos_int(v) -> bool:
    return _is_int(v) and v >= 1


def _nonneg_int(v) -> bool:
    return _is_int(v) and v >= 0


def _pos_num(v) -> bool:
    return _is_num(v) and v > 0


def _nonneg_num(v) -> bool:
    return _is_num(v) and v >= 0


def _ident(v) -> bool:
    return isinstance(v, str) or _is_int(v)


def _label(v) -> bool:
    return isinstance(v, str) and v != ""


def _box_like(v) -> bool:
    return isinstance(v, list) and len(v) == 4 and all(_is_num(x) for x in v)


def load_images(path: str) -> list[tuple[Any, imgproc.PatchGrid]]:
    out = []
    for lineno, obj in read_manifest(path):
        ident = _get(obj, "id", lineno, _ident, "a string or integer")
        w = _get(obj, "width", lineno, _pos_int, "a positive integer")
        h = _get(obj, "height", lineno, _pos_int, "a positive integer")
        out.append((ident, imgproc.image_grid(w, h)))
    return out


def load_work_items(path: str, cfg: Config) -> list[tuple[int, balance.WorkItem]]:
    items = []
    for lineno, obj in read_manifest(path):
        ident = _get(obj, "id", lineno, _ident, "a string or integer")
        if obj.get("cost") is not None:
            cost = _get(obj, "cost", lineno, _nonneg_num, "a finite nonnegative number")
        else:
            n = _get(obj, "n_patches", lineno, _pos_int, "a positive integer", default=None)
            if n is None:
                raise ManifestError(f"line {lineno}: need one of 'cost' or 'n_patches'")
            cost = balance.image_cost(n, cfg.cost_a, cfg.cost_b)
        origin = _get(obj, "origin", lineno, _nonneg_int, "a nonnegative integer", default=None)
        items.append((lineno, balance.WorkItem(ident, cost, origin)))
    return items


def load_records(path: str) -> list[datamix.Record]:
    out = []
    for lineno, obj in read_manifest(path):
        ident = _get(obj, "id", lineno, _ident, "a string or integer")
        domain = _get(obj, "domain", lineno, _label, "a nonempty string")
        label = _get(obj, "class", lineno, _label, "a nonempty string", default=None)
        out.append(datamix.Record(ident, domain, label))
    return out


def _record_dict(r: datamix.Record) -> dict:
    return {"id": r.record_id, "domain": r.domain, "class": r.class_label}


# -- subcommands ------------------------------------------------------------

def cmd_snap(args, cfg: Config) -> dict:
    if args.images:
        entries = load_images(args.images)
    elif args.width is not None and args.height is not None:
        entries = [(None, imgproc.image_grid(args.width, args.height))]
    else:
        raise UsageError("snap needs --images or both --width and --height")
    images = []
    for ident, g in entries:
        images.append({
            "id": ident,
            "snapped_width": g.snapped_width,
            "snapped_height": g.snapped_height,
            "rows": g.rows,
            "cols": g.cols,
            "n_patches": g.n_patches,
            "n_pooled": g.n_pooled,
        })
    return {"images": images}


def cmd_pack(args, cfg: Config) -> dict:
    entries = load_images(args.images)
    items = [packer.PackItem(ident, g.n_patches) for ident, g in entries]
    try:
        plan = packer.pack_images(items, cfg.max_seq_len)
    except packer.OversizeItemError as exc:
        raise ManifestError(str(exc)) from None
    bins = []
    for b in plan.bins:
        bins.append({
            "items": [it.item_id for it in b],
            "segment_lengths": [it.token_count for it in b],
            "tokens": sum(it.token_count for it in b),
        })
    return {"max_seq_len": plan.max_seq_len, "n_bins": len(bins), "bins": bins}


def cmd_plan_video(args, cfg: Config) -> dict:
    plan = videoplan.plan_video(args.duration, args.mode, cfg.budget, cfg.levels)
    return plan.to_dict()


def cmd_balance(args, cfg: Config) -> dict:
    lined = load_work_items(args.items, cfg)
    for lineno, it in lined:
        if it.origin_worker is not None and it.origin_worker >= args.workers:
            raise ManifestError(
                f"line {lineno}: origin {it.origin_worker} out of range for {args.workers} workers"
            )
    items = [it for _, it in lined]
    if cfg.group_size >= args.workers:
        assignment = balance.lpt_assign(items, args.workers)
    else:
        missing = [lineno for lineno, it in lined if it.origin_worker is None]
        if missing:
            raise ManifestError(f"line {missing[0]}: group balancing needs an 'origin' on every item")
        assignment = balance.group_balance(items, args.workers, cfg.group_size)
    return {
        "n_workers": assignment.n_workers,
        "group_size": min(cfg.group_size, args.workers),
        "loads": list(assignment.loads),
        "makespan": assignment.makespan,
        "assignment": [[it.item_id for it in w] for w in assignment.items],
    }


SCORE_TASKS = ("format", "grounding", "point", "count", "boxed", "match")


def _parse_gt(task: str, gt, where: str):
    """Turn a ground-truth field (JSON value or flag string) into the task's type."""
    if task in ("grounding", "point"):
        if isinstance(gt, str):
            try:
                gt = [float(v) for v in gt.replace(",", " ").split()]
            except ValueError:
                raise ManifestError(f"{where}: gt must be four numbers") from None
        if not _box_like(gt):
            raise ManifestError(f"{where}: gt must be a box [x1, y1, x2, y2]")
        return gt
    if task == "match":
        if isinstance(gt, str):
            return rewards.parse_bboxes(gt)
        if not isinstance(gt, list) or not all(_box_like(b) for b in gt):
            raise ManifestError(f"{where}: gt must be a list of boxes")
        return gt
    if task == "count":
        if not _nonneg_int(gt):
            raise ManifestError(f"{where}: gt must be a nonnegative integer")
        return gt
    if task == "boxed":
        if _is_num(gt):
            return str(gt)
        if not isinstance(gt, str):
            raise ManifestError(f"{where}: gt must be a string")
        return gt
    return gt


def score_one(task: str, pred: str, gt, cfg: Config, select: str = "first",
              require_think: bool = False) -> dict:
    if task == "format":
        return rewards.format_reward(pred).to_dict()
    if task == "grounding":
        return rewards.grounding_reward(pred, gt, select=select, require_think=require_think).to_dict()
    if task == "point":
        return rewards.point_reward(pred, gt, require_think=require_think).to_dict()
    if task == "boxed":
        return rewards.boxed_reward(pred, gt, require_think=require_think).to_dict()
    scan = rewards.scan_points(pred) if task == "count" else rewards.scan_bboxes(pred)
    out = {"compliant": bool(scan.valid), "malformed": len(scan.malformed)}
    if task == "count":
        out["count"] = len(scan.valid)
        if gt is not None:
            out["reward"] = 1.0 if len(scan.valid) == gt else 0.0
        return out
    out["payload"] = [list(b) for b in scan.valid]
    out.update(rewards.match_boxes(scan.valid, gt or [], cfg.iou_threshold))
    out["reward"] = out["f1"]
    return out


def cmd_score(args, cfg: Config) -> dict:
    if args.input:
        results = []
        for lineno, obj in read_manifest(args.input):
            where = f"line {lineno}"
            task = _get(obj, "task", lineno, lambda v: v in SCORE_TASKS, f"one of {SCORE_TASKS}")
            pred = _get(obj, "pred", lineno, lambda v: isinstance(v, str), "a string")
            gt = obj.get("gt")
            if gt is None and task not in ("format", "count"):
                raise ManifestError(f"{where}: missing field 'gt'")
            if gt is not None:
                gt = _parse_gt(task, gt, where)
            results.append(score_one(task, pred, gt, cfg, args.select, args.require_think))
        return {"results": results}

    if args.task is None or args.pred is None:
        raise UsageError("score needs --input, or --task and --pred")
    gt = args.gt
    if gt is None and args.task not in ("format", "count"):
        raise UsageError(f"score --task {args.task} needs --gt")
    if gt is not None:
        if args.task == "count":
            try:
                gt = int(gt)
            except ValueError:
                raise UsageError("--gt must be an integer for count") from None
        try:
            gt = _parse_gt(args.task, gt, "--gt")
        except ManifestError as exc:
            raise UsageError(str(exc)) from None
    return score_one(args.task, args.pred, gt, cfg, args.select, args.require_think)


def cmd_fit(args, cfg: Config) -> dict:
    rows = read_manifest(args.points)
    if args.model == "loglog":
        pts = [
            (_get(o, "d", n, _pos_num, "a positive number"), _get(o, "l", n, _pos_num, "a positive number"))
            for n, o in rows
        ]
        if len({d for d, _ in pts}) < 2:
            raise ManifestError("need at least two distinct 'd' values")
        fit = scalefit.fit_loglog(pts)
        return {"model": "loglog", "a": fit.a, "b": fit.b, "residual_rms": fit.residual_rms, "n": len(pts)}
    pts = [
        (_get(o, "loss", n, _pos_num, "a positive number"), _get(o, "metric", n, _is_num, "a finite number"))
        for n, o in rows
    ]
    if len({x for x, _ in pts}) < 2:
        raise ManifestError("need at least two distinct 'loss' values")
    fit = scalefit.fit_metric_vs_logloss(pts)
    return {
        "model": "metric",
        "slope": fit.slope,
        "intercept": fit.intercept,
        "residual_rms": fit.residual_rms,
        "n": len(pts),
    }


def cmd_rebalance(args, cfg: Config) -> dict:
    records = load_records(args.records)
    before = datamix.DomainCensus.of(records)
    low = datamix.underrepresented_domains(before)
    out = datamix.rebalance(records)
    after = datamix.DomainCensus.of(out)
    return {
        "underrepresented": sorted(low),
        "counts_before": before.counts,
        "counts_after": after.counts,
        "records": [_record_dict(r) for r in out],
    }


def cmd_cap(args, cfg: Config) -> dict:
    records = load_records(args.records)
    kept = datamix.cap_per_class(records, args.cap, cfg.seed)
    return {"cap": args.cap, "seed": cfg.seed, "n_in": len(records), "n_kept": len(kept),
            "records": [_record_dict(r) for r in kept]}


# -- argument parsing -------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_float(s: str) -> float:
    v = float(s)
    if not (math.isfinite(v) and v > 0):
        raise argparse.ArgumentTypeError(f"must be a positive number, got {s}")
    return v


def _positive_int(s: str) -> int:
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {s}")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="vlplan", description="Data-plane planning tools for native-resolution VLM training.")
    p.add_argument("--config", help="flat JSON config file")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("snap", help="snap image dims to 28-px multiples and count patches")
    s.add_argument("--images", help="JSONL {id, width, height}")
    s.add_argument("--width", type=_positive_int)
    s.add_argument("--height", type=_positive_int)
    s.set_defaults(func=cmd_snap)

    s = sub.add_parser("pack", help="first-fit-decreasing packing of image patch sequences")
    s.add_argument("--images", required=True, help="JSONL {id, width, height}")
    s.add_argument("--max-seq-len", type=int, dest="max_seq_len")
    s.set_defaults(func=cmd_pack)

    s = sub.add_parser("plan-video", help="frame rate and token level for one video")
    s.add_argument("--duration", type=_positive_float, required=True, help="seconds")
    s.add_argument("--mode", choices=[m.value for m in videoplan.SamplingMode], default="general")
    s.add_argument("--budget", type=int)
    s.add_argument("--levels", help="comma-separated, strictly decreasing")
    s.set_defaults(func=cmd_plan_video)

    s = sub.add_parser("balance", help="LPT workload balancing across workers")
    s.add_argument("--items", required=True, help="JSONL {id, cost | n_patches, origin}")
    s.add_argument("--workers", type=_positive_int, required=True)
    s.add_argument("--group-size", type=int, dest="group_size")
    s.add_argument("--cost-a", type=float, dest="cost_a")
    s.add_argument("--cost-b", type=float, dest="cost_b")
    s.set_defaults(func=cmd_balance)

    s = sub.add_parser("score", help="verifiable reward scoring")
    s.add_argument("--input", help="JSONL {pred, gt, task}")
    s.add_argument("--task", choices=SCORE_TASKS)
    s.add_argument("--pred")
    s.add_argument("--gt")
    s.add_argument("--select", choices=("first", "best"), default="first",
                   help="which predicted box a grounding reward scores")
    s.add_argument("--require-think", action="store_true",
                   help="zero the reward unless the response is <think>...</think>solution")
    s.add_argument("--iou-threshold", type=float, dest="iou_threshold")
    s.set_defaults(func=cmd_score)

    s = sub.add_parser("fit", help="log-space scaling fits")
    s.add_argument("--model", choices=("loglog", "metric"), required=True)
    s.add_argument("--points", required=True, help="JSONL {d, l} or {loss, metric}")
    s.set_defaults(func=cmd_fit)

    s = sub.add_parser("rebalance", help="duplicate records of underrepresented domains")
    s.add_argument("--records", required=True, help="JSONL {id, domain, class}")
    s.set_defaults(func=cmd_rebalance)

    s = sub.add_parser("cap", help="reservoir-cap records per class")
    s.add_argument("--records", required=True, help="JSONL {id, domain, class}")
    s.add_argument("--cap", type=_positive_int, required=True)
    s.add_argument("--seed", type=int)
    s.set_defaults(func=cmd_cap)
    return p


_CONFIG_FLAGS = ("budget", "levels", "max_seq_len", "group_size", "iou_threshold", "cost_a", "cost_b", "seed")


def run(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE

    overrides = {k: getattr(args, k, None) for k in _CONFIG_FLAGS}
    try:
        cfg = load_config(args.config, overrides=overrides)
    except ConfigError as exc:
        print(f"vlplan: {exc}", file=stderr)
        return EXIT_USAGE

    try:
        result = args.func(args, cfg)
    except UsageError as exc:
        print(f"vlplan: {exc}", file=stderr)
        return EXIT_USAGE
    except (ManifestError, ValueError) as exc:
        print(f"vlplan: input error: {exc}", file=stderr)
        return EXIT_DATA
    print(dump_json(result), file=stdout)
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
