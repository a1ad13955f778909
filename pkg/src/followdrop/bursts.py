"""Tweet-burst detection over the time-sorted tweet stream.

A burst is a maximal run of consecutive tweets where every inter-arrival
gap is <= a threshold (default 1000 seconds). Singleton runs count as
bursts with period 0 unless include_singletons is disabled.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

__all__ = ["Burst", "BurstFeatures", "detect_bursts", "burst_features", "DEFAULT_GAP_SECONDS"]

DEFAULT_GAP_SECONDS = 1000.0


@dataclass(frozen=True)
class Burst:
    start_index: int
    end_index: int
    start_time: float
    end_time: float

    @property
    def period(self) -> float:
        return self.end_time - self.start_time

    @property
    def size(self) -> int:
        return self.end_index - self.start_index + 1


@dataclass(frozen=True)
class BurstFeatures:
    mean_inter_burst_gap: float
    mean_period: float
    max_period: float
    min_period: float
    burst_count: int


def detect_bursts(
    timestamps: Sequence[float],
    gap_threshold: float = DEFAULT_GAP_SECONDS,
) -> list[Burst]:
    """Partition ascending timestamps into maximal runs with gaps <= threshold."""
    n = len(timestamps)
    for i in range(1, n):
        if timestamps[i] < timestamps[i - 1]:
            raise ValueError(f"timestamps not ascending at index {i}")
    bursts: list[Burst] = []
    start = 0
    for i in range(1, n + 1):
        if i == n or timestamps[i] - timestamps[i - 1] > gap_threshold:
            bursts.append(
                Burst(
                    start_index=start,
                    end_index=i - 1,
                    start_time=float(timestamps[start]),
                    end_time=float(timestamps[i - 1]),
                )
            )
            start = i
    return bursts


def burst_features(
    bursts: Sequence[Burst],
    include_singletons: bool = True,
) -> BurstFeatures | None:
    """Summary statistics over bursts; None when no (qualifying) bursts exist.

    The inter-burst gap is measured from the end of one burst to the
    start of the next; a single burst yields gap 0.
    """
    if not include_singletons:
        bursts = [b for b in bursts if b.size >= 2]
    if not bursts:
        return None
    periods = [b.period for b in bursts]
    gaps = [
        bursts[i + 1].start_time - bursts[i].end_time
        for i in range(len(bursts) - 1)
    ]
    return BurstFeatures(
        mean_inter_burst_gap=sum(gaps) / len(gaps) if gaps else 0.0,
        mean_period=sum(periods) / len(periods),
        max_period=max(periods),
        min_period=min(periods),
        burst_count=len(bursts),
    )
