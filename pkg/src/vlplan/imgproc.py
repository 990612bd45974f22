"""Native-resolution image geometry.

Images are snapped to the nearest 28-pixel multiple on each side so that they
split exactly into 14x14 patches, and 2x2 pooling of the patch grid then lands
on whole tokens.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

CELL = 28
PATCH = 14


@dataclass(frozen=True)
class ImageDims:
    width: int
    height: int

    def __post_init__(self):
        if int(self.width) != self.width or int(self.height) != self.height:
            raise ValueError(f"image dims must be integers, got {self.width}x{self.height}")
        if self.width < 1 or self.height < 1:
            raise ValueError(f"image dims must be positive, got {self.width}x{self.height}")


@dataclass(frozen=True)
class PatchGrid:
    snapped_width: int
    snapped_height: int
    rows: int
    cols: int

    @property
    def n_patches(self) -> int:
        return self.rows * self.cols

    @property
    def n_pooled(self) -> int:
        return (self.rows // 2) * (self.cols // 2)


class RopePosition(NamedTuple):
    row_index: int
    col_index: int


@dataclass(frozen=True)
class MimMask:
    n_patches: int
    masked: np.ndarray
    ratio: float

    @property
    def n_masked(self) -> int:
        return int(self.masked.sum())


def _snap_side(x: int) -> int:
    # (x + 14) // 28 rounds to nearest with ties going up
    return max(1, (x + CELL // 2) // CELL) * CELL


def snap_resolution(dims: ImageDims | tuple[int, int]) -> tuple[int, int]:
    """Return ``(width, height)`` snapped to the nearest multiples of 28.

    Ties round up and nothing snaps below 28, so ``(10, 3000)`` becomes
    ``(28, 2996)``.
    """
    if not isinstance(dims, ImageDims):
        dims = ImageDims(*dims)
    return _snap_side(dims.width), _snap_side(dims.height)


def patch_grid(snapped_width: int, snapped_height: int) -> PatchGrid:
    for name, v in (("width", snapped_width), ("height", snapped_height)):
        if v < CELL or v % CELL:
            raise ValueError(f"snapped {name} must be a positive multiple of {CELL}, got {v}")
    return PatchGrid(
        snapped_width=snapped_width,
        snapped_height=snapped_height,
        rows=snapped_height // PATCH,
        cols=snapped_width // PATCH,
    )


def image_grid(width: int, height: int) -> PatchGrid:
    """Snap raw image dims and build the patch grid in one step."""
    return patch_grid(*snap_resolution(ImageDims(width, height)))


def rope_positions(grid: PatchGrid) -> list[RopePosition]:
    """Row-major (row, col) lattice position of every patch."""
    return [RopePosition(k // grid.cols, k % grid.cols) for k in range(grid.n_patches)]


def rope_position_array(grid: PatchGrid) -> np.ndarray:
    """Same as :func:`rope_positions` as an ``(n_patches, 2)`` int array."""
    rows, cols = np.divmod(np.arange(grid.n_patches), grid.cols)
    return np.stack([rows, cols], axis=1)


def rope_frequencies(head_dim: int, base: float = 10000.0) -> np.ndarray:
    if head_dim <= 0 or head_dim % 4:
        raise ValueError(f"head_dim must be a positive multiple of 4, got {head_dim}")
    if not base > 1:
        raise ValueError(f"base must be > 1, got {base}")
    quarter = head_dim // 4
    return base ** (-4.0 * np.arange(quarter) / head_dim)


def rope_angles(pos: RopePosition | tuple[int, int], head_dim: int, base: float = 10000.0) -> np.ndarray:
    """Rotation angles for one patch position, length ``head_dim // 2``.

    The first half of the rotation pairs encodes the row index and the second
    half the column index, both with the usual geometric frequency ladder.
    Angle differences between two positions therefore depend only on the
    (row, col) offset.
    """
    freqs = rope_frequencies(head_dim, base)
    row, col = pos
    return np.concatenate([row * freqs, col * freqs])


def _round_half_up(ratio: float, n: int) -> int:
    # via the decimal literal so 0.75 * 10 is exactly 7.5
    exact = Fraction(str(ratio)) * n
    return int((exact + Fraction(1, 2)) // 1)


def mim_mask_count(n_patches: int, ratio: float) -> int:
    return _round_half_up(ratio, n_patches)


def sample_mim_mask(n_patches: int, ratio: float = 0.75, seed: int = 0) -> MimMask:
    if n_patches < 1:
        raise ValueError(f"n_patches must be >= 1, got {n_patches}")
    if not 0.0 <= ratio <= 1.0:
        raise ValueError(f"mask ratio must lie in [0, 1], got {ratio}")
    k = mim_mask_count(n_patches, ratio)
    rng = np.random.default_rng(seed)
    masked = np.zeros(n_patches, dtype=bool)
    masked[rng.choice(n_patches, size=k, replace=False)] = True
    masked.flags.writeable = False
    return MimMask(n_patches=n_patches, masked=masked, ratio=ratio)
