import math
import random

import numpy as np
import pytest

from vlplan.videoplan import (
    DEFAULT_LEVELS,
    SamplingMode,
    frame_timestamps,
    plan_video,
    select_fps,
    timestamp_token,
    uniform_sample,
)


@pytest.mark.parametrize("mode, fps", [("general", 1), ("temporal", 2), ("fine_motion", 5)])
def test_select_fps(mode, fps):
    assert select_fps(mode) == fps
    assert select_fps(SamplingMode(mode)) == fps


def test_short_video_full_resolution():
    p = plan_video(100, "general")
    assert (p.n_frames, p.level, p.total_tokens, p.fallback_used) == (100, 640, 64000, False)
    np.testing.assert_array_equal(p.frame_indices, np.arange(100))


def test_long_video_falls_back_to_640_frames():
    p = plan_video(1000, "general", 81920)
    assert p.fallback_used
    assert (p.n_frames, p.level, p.total_tokens) == (640, 128, 81920)
    np.testing.assert_array_equal(p.frame_indices, uniform_sample(1000, 640))


def test_fine_motion_level_drop():
    p = plan_video(30, "fine_motion")
    assert (p.n_frames, p.level, p.total_tokens) == (150, 512, 76800)


def test_sub_second_video_gets_one_frame():
    p = plan_video(0.2, "general")
    assert p.n_frames == 1 and p.level == 640


@pytest.mark.parametrize("duration", [0, -3])
def test_nonpositive_duration(duration):
    with pytest.raises(ValueError):
        plan_video(duration)


def test_budget_below_lowest_level():
    with pytest.raises(ValueError):
        plan_video(10, budget=100)


def test_uniform_sample_examples():
    np.testing.assert_array_equal(uniform_sample(10, 10), np.arange(10))
    np.testing.assert_array_equal(uniform_sample(10, 5), [1, 3, 5, 7, 9])
    idx = uniform_sample(1000, 640)
    assert len(idx) == 640 and np.all(np.diff(idx) > 0) and idx[0] >= 0 and idx[-1] <= 999
    with pytest.raises(ValueError):
        uniform_sample(3, 4)


def test_uniform_sample_matches_formula():
    rng = random.Random(1)
    for _ in range(500):
        n = rng.randint(1, 3000)
        m = rng.randint(1, n)
        expected = [math.floor((k + 0.5) * n / m) for k in range(m)]
        np.testing.assert_array_equal(uniform_sample(n, m), expected)


@pytest.mark.parametrize(
    "t, token", [(1.5, "[1.5 second]"), (0, "[0 second]"), (12.25, "[12.25 second]"), (3.0, "[3 second]"), (10, "[10 second]"), (0.5, "[0.5 second]")]
)
def test_timestamp_token(t, token):
    assert timestamp_token(t) == token


def test_timestamp_token_negative():
    with pytest.raises(ValueError):
        timestamp_token(-0.5)


def test_frame_timestamps():
    assert frame_timestamps([0, 1, 2], 1).tolist() == [0, 1, 2]
    assert frame_timestamps([0, 1, 2], 2).tolist() == [0, 0.5, 1]
    assert frame_timestamps([1, 3], 1).tolist() == [1, 3]
    p = plan_video(3, "temporal")
    assert p.timestamp_tokens()[:3] == ["[0 second]", "[0.5 second]", "[1 second]"]
    assert np.all(np.diff(p.timestamps) > 0)


def test_custom_levels():
    p = plan_video(10, "general", budget=1000, levels=(100, 50))
    assert (p.level, p.n_frames) == (100, 10)
    with pytest.raises(ValueError):
        plan_video(10, levels=(128, 256))


def test_plan_dict_has_exact_fields():
    d = plan_video(5).to_dict()
    assert set(d) == {"fps", "n_frames", "level", "frame_indices", "timestamps", "total_tokens", "fallback_used"}


def test_budget_and_maximality_fuzz():
    rng = random.Random(3)
    for _ in range(5000):
        b = rng.randint(128, 200000)
        p = plan_video(rng.uniform(0.01, 5000), rng.choice(list(SamplingMode)), b)
        assert p.total_tokens <= b
        if not p.fallback_used:
            assert all(p.n_frames * lv > b for lv in DEFAULT_LEVELS if lv > p.level)
        else:
            assert p.level == 128 and p.n_frames == b // 128
