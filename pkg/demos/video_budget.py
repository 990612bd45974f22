"""Frame rate and token level for videos of different lengths."""

from vlplan.videoplan import plan_video

for duration, mode in [(20, "general"), (100, "general"), (30, "fine_motion"), (300, "temporal"), (1000, "general")]:
    p = plan_video(duration, mode)
    kind = "fallback (uniform subsample)" if p.fallback_used else "all frames"
    print(f"{duration:>5}s {mode:<12} fps={p.fps} frames={p.n_frames:<4} level={p.level:<4} "
          f"tokens={p.total_tokens:<6} {kind}")

# Each frame is preceded by a timestamp token.
p = plan_video(3, "temporal")
print("\ntimestamps for a 3 s clip at 2 FPS:", " ".join(p.timestamp_tokens()))

# The long video keeps 640 frames spread across the whole clip.
p = plan_video(1000, "general")
print("first/last kept frames:", p.frame_indices[:5].tolist(), "...", p.frame_indices[-3:].tolist())
