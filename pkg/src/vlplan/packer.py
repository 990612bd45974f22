"""Packing of per-image patch sequences into fixed-length training sequences.

Items are placed with first-fit-decreasing. Each packed bin carries segment
ids so attention can be restricted to tokens of the same image.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Sequence

import numpy as np


class OversizeItemError(ValueError):
    def __init__(self, item_id, token_count: int, max_seq_len: int):
        super().__init__(
            f"item {item_id!r} has {token_count} tokens, more than max_seq_len={max_seq_len}"
        )
        self.item_id = item_id


@dataclass(frozen=True)
class PackItem:
    item_id: Hashable
    token_count: int

    def __post_init__(self):
        if self.token_count < 1:
            raise ValueError(f"item {self.item_id!r}: token_count must be >= 1")


Bin = tuple[PackItem, ...]


@dataclass(frozen=True)
class PackPlan:
    max_seq_len: int
    bins: tuple[Bin, ...]

    @property
    def segment_ids(self) -> list[np.ndarray]:
        return [segment_ids(b) for b in self.bins]

    def bin_tokens(self) -> list[int]:
        return [sum(it.token_count for it in b) for b in self.bins]


def pack_images(items: Sequence[PackItem], max_seq_len: int) -> PackPlan:
    if max_seq_len < 1:
        raise ValueError(f"max_seq_len must be >= 1, got {max_seq_len}")
    for it in items:
        if it.token_count > max_seq_len:
            raise OversizeItemError(it.item_id, it.token_count, max_seq_len)

    order = sorted(range(len(items)), key=lambda i: -items[i].token_count)
    bins: list[list[PackItem]] = []
    free: list[int] = []
    for i in order:
        it = items[i]
        for b, room in enumerate(free):
            if it.token_count <= room:
                bins[b].append(it)
                free[b] -= it.token_count
                break
        else:
            bins.append([it])
            free.append(max_seq_len - it.token_count)
    return PackPlan(max_seq_len=max_seq_len, bins=tuple(tuple(b) for b in bins))


def segment_ids(bin: Sequence[PackItem]) -> np.ndarray:
    """Per-token index of the owning item within the bin."""
    sizes = [it.token_count for it in bin]
    return np.repeat(np.arange(len(sizes)), sizes)


def build_attention_mask(bin: Sequence[PackItem]) -> np.ndarray:
    """Block-diagonal boolean mask, ``True`` where attention is allowed."""
    seg = segment_ids(bin)
    return seg[:, None] == seg[None, :]
