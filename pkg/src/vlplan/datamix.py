"""Data-mixture rebalancing.

``rebalance`` duplicates records from domains whose count is below half the
mean domain count. ``cap_per_class`` keeps at most K records per class from a
stream using one reservoir per class.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, replace
from typing import Hashable, Iterable, Optional

COPY_SUFFIX = "#dup"


@dataclass(frozen=True)
class Record:
    record_id: Hashable
    domain: str
    class_label: Optional[str] = None

    def __post_init__(self):
        if not self.domain:
            raise ValueError(f"record {self.record_id!r}: domain must be nonempty")


@dataclass(frozen=True)
class DomainCensus:
    counts: dict

    @classmethod
    def of(cls, records: Iterable[Record]) -> "DomainCensus":
        return cls(dict(Counter(r.domain for r in records)))

    @property
    def mean_count(self) -> float:
        if not self.counts:
            return 0.0
        return sum(self.counts.values()) / len(self.counts)


def underrepresented_domains(census: DomainCensus | dict) -> set:
    if not isinstance(census, DomainCensus):
        census = DomainCensus(dict(census))
    counts = census.counts
    total, n = sum(counts.values()), len(counts)
    # count < 0.5 * total / n, kept in integers
    return {d for d, c in counts.items() if 2 * n * c < total}


def rebalance(records: Iterable[Record]) -> list[Record]:
    """Append one copy of every record from an underrepresented domain.

    The census is taken once on the input, so the copies themselves do not
    move the threshold. Copies get ``#dup`` appended to their id.
    """
    records = list(records)
    low = underrepresented_domains(DomainCensus.of(records))
    dups = [replace(r, record_id=f"{r.record_id}{COPY_SUFFIX}") for r in records if r.domain in low]
    return records + dups


def cap_per_class(records: Iterable[Record], cap: int, seed: int = 0) -> list[Record]:
    """Reservoir-sample at most ``cap`` records for each class label.

    Records without a class label are grouped under ``None``. Survivors are
    returned in their original stream order.
    """
    if cap < 1:
        raise ValueError(f"cap must be >= 1, got {cap}")
    rng = random.Random(seed)
    reservoirs: dict = {}
    seen: Counter = Counter()
    for pos, r in enumerate(records):
        key = r.class_label
        seen[key] += 1
        slots = reservoirs.setdefault(key, [])
        if len(slots) < cap:
            slots.append((pos, r))
        else:
            j = rng.randrange(seen[key])
            if j < cap:
                slots[j] = (pos, r)
    kept = sorted(item for slots in reservoirs.values() for item in slots)
    return [r for _, r in kept]
