"""Greedy balancing of vision work across GPUs.

Items are sorted by cost, largest first, and each one goes to the currently
least-loaded worker (longest-processing-time scheduling). ``group_balance``
applies the same rule inside contiguous groups of workers so that items never
travel outside their origin group.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Hashable, Optional, Sequence


@dataclass(frozen=True)
class WorkItem:
    item_id: Hashable
    cost: float
    origin_worker: Optional[int] = None

    def __post_init__(self):
        if self.cost < 0:
            raise ValueError(f"item {self.item_id!r}: cost must be >= 0, got {self.cost}")


@dataclass(frozen=True)
class Assignment:
    n_workers: int
    items: tuple[tuple[WorkItem, ...], ...]

    @property
    def loads(self) -> tuple:
        return tuple(sum(it.cost for it in w) for w in self.items)

    @property
    def makespan(self):
        return max(self.loads, default=0)

    def worker_of(self) -> dict:
        """Map ``item_id`` to the worker it was assigned to."""
        return {it.item_id: w for w, its in enumerate(self.items) for it in its}


def image_cost(n_patches: int, linear_coeff: float = 1.0, quadratic_coeff: float = 0.0) -> float:
    """FLOPs proxy for encoding one image: ``a*n + b*n**2``."""
    if n_patches < 1:
        raise ValueError(f"n_patches must be >= 1, got {n_patches}")
    if linear_coeff < 0 or quadratic_coeff < 0:
        raise ValueError("cost coefficients must be nonnegative")
    return linear_coeff * n_patches + quadratic_coeff * n_patches * n_patches


def lpt_assign(items: Sequence[WorkItem], n_workers: int) -> Assignment:
    if n_workers < 1:
        raise ValueError(f"n_workers must be >= 1, got {n_workers}")
    # sorted() is stable, so equal costs keep input order
    order = sorted(items, key=lambda it: -it.cost)
    buckets: list[list[WorkItem]] = [[] for _ in range(n_workers)]
    heap = [(0, w) for w in range(n_workers)]
    for it in order:
        load, w = heapq.heappop(heap)
        buckets[w].append(it)
        heapq.heappush(heap, (load + it.cost, w))
    return Assignment(n_workers=n_workers, items=tuple(tuple(b) for b in buckets))


def worker_groups(n_workers: int, group_size: int) -> list[range]:
    if group_size < 1:
        raise ValueError(f"group_size must be >= 1, got {group_size}")
    return [range(s, min(s + group_size, n_workers)) for s in range(0, n_workers, group_size)]


def group_balance(items: Sequence[WorkItem], n_workers: int, group_size: int) -> Assignment:
    if n_workers < 1:
        raise ValueError(f"n_workers must be >= 1, got {n_workers}")
    groups = worker_groups(n_workers, group_size)
    per_group: list[list[WorkItem]] = [[] for _ in groups]
    for it in items:
        w = it.origin_worker
        if w is None or not 0 <= w < n_workers:
            raise ValueError(f"item {it.item_id!r}: invalid origin worker {w!r} for {n_workers} workers")
        per_group[w // group_size].append(it)

    buckets: list[tuple[WorkItem, ...]] = []
    for g, members in zip(groups, per_group):
        buckets.extend(lpt_assign(members, len(g)).items)
    return Assignment(n_workers=n_workers, items=tuple(buckets))


def makespan(assignment: Assignment):
    return assignment.makespan
