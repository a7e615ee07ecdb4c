"""Automatic period delimiters that roughly group measures by powers of ten.

Measures are first bucketed by decade (floor of log10), then undersized
buckets are merged into their more-recent neighbours in a single sweep from
most ancient to most recent. The largest measure of each surviving bucket
becomes an anchor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import ChronoError
from .model import Violation


@dataclass(frozen=True)
class PartitionParams:
    min_per_range: int = 3
    max_per_range: int = 12

    def __post_init__(self) -> None:
        if self.min_per_range < 1 or self.min_per_range > self.max_per_range:
            raise ChronoError("E_BAD_PARAMS", "need 1 <= min_per_range <= max_per_range")


@dataclass
class PartitionReport:
    counts: list[int]
    warnings: list[Violation] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"counts": self.counts, "warnings": [vars(v) for v in self.warnings]}


def _decade(measure: float) -> int:
    d = math.floor(math.log10(measure))
    # Guard against log rounding right at a power of ten.
    if 10.0 ** (d + 1) <= measure:
        d += 1
    elif 10.0 ** d > measure:
        d -= 1
    return d


def auto_partition(measures: list[float], params: PartitionParams = PartitionParams()) -> list[int]:
    """Choose anchor positions (indices into the sorted measure list).

    The sweep merges a bucket smaller than ``min_per_range`` into its
    more-recent neighbour unless that would push the neighbour past
    ``max_per_range`` while at least two buckets remain. The most recent
    bucket has no such neighbour; if undersized it merges with its more
    ancient neighbour unconditionally, so a lone undersized present-day
    bucket never survives.
    """
    if not measures:
        raise ChronoError("E_EMPTY", "no measures to partition")
    for i, m in enumerate(measures):
        if m < 1:
            raise ChronoError("E_NONPOSITIVE", f"measure {m} at position {i} is below 1")
        if i > 0 and m < measures[i - 1]:
            raise ChronoError("E_NOT_SORTED", f"measures not sorted ascending at position {i}")

    # Buckets as index ranges [start, end) over the sorted list, most recent
    # first. Empty decades simply never appear.
    buckets: list[list[int]] = []
    start = 0
    for i in range(1, len(measures) + 1):
        if i == len(measures) or _decade(measures[i]) != _decade(measures[start]):
            buckets.append([start, i])
            start = i

    pos = len(buckets) - 1
    while pos >= 0 and len(buckets) > 1:
        size = buckets[pos][1] - buckets[pos][0]
        if size >= params.min_per_range:
            pos -= 1
            continue
        if pos > 0:
            neighbour = pos - 1
            merged = buckets[neighbour][1] - buckets[neighbour][0] + size
            if merged > params.max_per_range:
                pos -= 1  # leave it undersized; the cap wins for non-final merges
                continue
        else:
            neighbour = pos + 1  # most recent bucket: forced merge upward
        lo = min(buckets[neighbour][0], buckets[pos][0])
        hi = max(buckets[neighbour][1], buckets[pos][1])
        keep = min(neighbour, pos)
        buckets[keep] = [lo, hi]
        del buckets[max(neighbour, pos)]
        pos = keep if neighbour < pos else keep - 1

    return [end - 1 for _, end in buckets]


def partition_report(measures: list[float], anchors: list[int],
                     params: PartitionParams = PartitionParams()) -> PartitionReport:
    """Lint a partition: per-range counts plus size and range-count warnings."""
    if not anchors or anchors[-1] != len(measures) - 1 or sorted(set(anchors)) != list(anchors):
        raise ChronoError("E_BAD_ANCHORS", "anchors must be strictly increasing and end at the last measure")

    counts = []
    prev = -1
    for a in anchors:
        counts.append(a - prev)
        prev = a

    report = PartitionReport(counts=counts)
    if len(counts) < 2:
        report.warnings.append(Violation("W_TOO_FEW_RANGES", "a single range defeats scale comparison"))
    for k, n in enumerate(counts):
        if n < params.min_per_range or n > params.max_per_range:
            report.warnings.append(Violation(
                "W_RANGE_SIZE",
                f"range {k} holds {n} values, outside {params.min_per_range}-{params.max_per_range}",
                k,
            ))
    return report
