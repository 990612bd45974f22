"""Data-plane planning for native-resolution vision-language training.

Modules:
    imgproc    resolution snapping, patch grids, 2D RoPE angles, MIM masks
    packer     first-fit-decreasing sequence packing and attention masks
    videoplan  frame-rate / token-level allocation under a video budget
    balance    LPT workload balancing, optionally within worker groups
    rewards    verifiable-reward parsers and scorers
    scalefit   log-space scaling-law fits
    datamix    domain rebalancing and per-class reservoir caps
    cli        the ``vlplan`` command
"""

from .balance import Assignment, WorkItem, group_balance, image_cost, lpt_assign, makespan
from .datamix import DomainCensus, Record, cap_per_class, rebalance, underrepresented_domains
from .imgproc import (
    ImageDims,
    MimMask,
    PatchGrid,
    RopePosition,
    patch_grid,
    rope_angles,
    rope_positions,
    sample_mim_mask,
    snap_resolution,
)
from .packer import PackItem, PackPlan, build_attention_mask, pack_images, segment_ids
from .scalefit import MetricFit, PowerLawFit, fit_loglog, fit_metric_vs_logloss, predict_loss, predict_metric
from .videoplan import SamplingMode, VideoPlan, plan_video, select_fps, timestamp_token, uniform_sample

__version__ = "0.1.0"
