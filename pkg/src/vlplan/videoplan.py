"""Frame-rate and per-frame token allocation for video inputs.

A video is sampled at a task-dependent frame rate. Every selected frame gets
the same token level, the largest one on the ladder that keeps the whole clip
under the visual-token budget. If even the smallest level does not fit, frames
are thinned out uniformly across the clip instead.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

DEFAULT_BUDGET = 81920
DEFAULT_LEVELS = (640, 512, 384, 256, 160, 128)


class SamplingMode(str, enum.Enum):
    GENERAL = "general"
    TEMPORAL = "temporal"
    FINE_MOTION = "fine_motion"


_FPS = {
    SamplingMode.GENERAL: 1,
    SamplingMode.TEMPORAL: 2,
    SamplingMode.FINE_MOTION: 5,
}


@dataclass(frozen=True, eq=False)
class VideoPlan:
    fps: int
    n_frames: int
    level: int
    frame_indices: np.ndarray
    timestamps: np.ndarray
    total_tokens: int
    fallback_used: bool

    def to_dict(self) -> dict:
        return {
            "fps": self.fps,
            "n_frames": self.n_frames,
            "level": self.level,
            "frame_indices": self.frame_indices.tolist(),
            "timestamps": self.timestamps.tolist(),
            "total_tokens": self.total_tokens,
            "fallback_used": self.fallback_used,
        }

    def timestamp_tokens(self) -> list[str]:
        return [timestamp_token(t) for t in self.timestamps]


def select_fps(mode: SamplingMode | str) -> int:
    return _FPS[SamplingMode(mode)]


def uniform_sample(n_total: int, n_keep: int) -> np.ndarray:
    """Midpoint-placed uniform subsample: ``floor((k + 0.5) * n_total / n_keep)``."""
    if not 1 <= n_keep <= n_total:
        raise ValueError(f"need 1 <= n_keep <= n_total, got n_keep={n_keep}, n_total={n_total}")
    k = np.arange(n_keep, dtype=np.int64)
    return ((2 * k + 1) * n_total) // (2 * n_keep)


def timestamp_token(t: float) -> str:
    if t < 0:
        raise ValueError(f"timestamp must be >= 0, got {t}")
    text = f"{t + 0.0:.2f}".rstrip("0").rstrip(".")
    return f"[{text} second]"


def frame_timestamps(plan_or_indices, fps: float | None = None) -> np.ndarray:
    """Seconds at which each selected frame occurs (source index / fps)."""
    if isinstance(plan_or_indices, VideoPlan):
        indices, fps = plan_or_indices.frame_indices, plan_or_indices.fps
    else:
        indices = plan_or_indices
        if fps is None:
            raise TypeError("fps is required when passing raw frame indices")
    return np.asarray(indices, dtype=np.int64) / fps


def _check_levels(levels: Sequence[int]) -> tuple[int, ...]:
    levels = tuple(int(v) for v in levels)
    if not levels or any(v <= 0 for v in levels):
        raise ValueError(f"levels must be positive integers, got {levels}")
    if any(a <= b for a, b in zip(levels, levels[1:])):
        raise ValueError(f"levels must be strictly decreasing, got {levels}")
    return levels


def plan_video(
    duration: float,
    mode: SamplingMode | str = SamplingMode.GENERAL,
    budget: int = DEFAULT_BUDGET,
    levels: Sequence[int] = DEFAULT_LEVELS,
) -> VideoPlan:
    if not duration > 0:
        raise ValueError(f"duration must be positive, got {duration}")
    levels = _check_levels(levels)
    lowest = levels[-1]
    if budget < lowest:
        raise ValueError(f"budget {budget} is below the lowest level {lowest}")

    fps = select_fps(mode)
    n0 = max(1, math.floor(duration * fps))
    for level in levels:
        if n0 * level <= budget:
            indices = np.arange(n0, dtype=np.int64)
            fallback = False
            break
    else:
        level = lowest
        indices = uniform_sample(n0, budget // lowest)
        fallback = True

    timestamps = frame_timestamps(indices, fps)
    indices.flags.writeable = False
    timestamps.flags.writeable = False
    return VideoPlan(
        fps=fps,
        n_frames=int(indices.size),
        level=level,
        frame_indices=indices,
        timestamps=timestamps,
        total_tokens=int(indices.size) * level,
        fallback_used=fallback,
    )
