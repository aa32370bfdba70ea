import math
from collections import deque
from typing import Deque, Iterator, List, Literal, Tuple

from pydantic import Field

from .base import DriftDetector, Verdict, check_finite
from cadrift.pydantic.models import BaseModel

# (sum of the values, sum of squared deviations from their mean)
Bucket = Tuple[float, float]


class AdwinConfig(BaseModel):
    kind: Literal["adwin"] = "adwin"
    delta: float = Field(default=0.002, gt=0, lt=1)
    max_buckets: int = Field(default=5, ge=2)
    min_window_length: int = Field(default=5, ge=1)
    grace_period: int = Field(default=10, ge=2)
    clock: int = Field(default=1, ge=1)

    def build(self, **hints) -> "ADWIN":
        return ADWIN(self)


class ADWIN(DriftDetector):
    """
    Adaptive windowing over an exponential histogram.

    Level ``i`` of the histogram holds up to ``max_buckets`` buckets of
    ``2 ** i`` consecutive elements, newest first. Every ``clock`` elements the
    window is split at each bucket boundary into an older and a newer part;
    when their means differ by more than the Bernstein bound for ``delta`` the
    oldest bucket is dropped and the check repeats.
    """

    name = "ADWIN"

    def __init__(self, config: AdwinConfig = None):
        super().__init__()
        self.config = config or AdwinConfig()
        self.reset()

    def reset(self) -> "ADWIN":
        super().reset()
        self.levels: List[Deque[Bucket]] = []
        self.width = 0
        self.total = 0.0
        self.m2 = 0.0
        self.ticks = 0
        self.n_detections = 0
        return self

    @property
    def mean(self) -> float:
        return self.total / self.width if self.width else 0.0

    @property
    def variance(self) -> float:
        return self.m2 / self.width if self.width else 0.0

    @property
    def n_buckets(self) -> int:
        return sum(len(level) for level in self.levels)

    def add_element(self, value) -> Verdict:
        x = check_finite(value)
        if self.width:
            self.m2 += self.width * (x - self.total / self.width) ** 2 / (self.width + 1)
        self.total += x
        self.width += 1
        if not self.levels:
            self.levels.append(deque())
        self.levels[0].appendleft((x, 0.0))
        self._compress()

        self.ticks += 1
        if self.ticks % self.config.clock == 0 and self._detect_cut():
            self.n_detections += 1
            return self._emit(Verdict.DRIFT)
        return self._emit(Verdict.NO_CHANGE)

    def _compress(self) -> None:
        for index, level in enumerate(self.levels):
            if len(level) <= self.config.max_buckets:
                break
            size = 2 ** index
            older_total, older_m2 = level.pop()
            newer_total, newer_m2 = level.pop()
            gap = older_total / size - newer_total / size
            merged = (
                older_total + newer_total,
                older_m2 + newer_m2 + size * size * gap * gap / (2 * size),
            )
            if index + 1 == len(self.levels):
                self.levels.append(deque())
            self.levels[index + 1].appendleft(merged)

    def _oldest_first(self) -> Iterator[Tuple[int, Bucket]]:
        for index in range(len(self.levels) - 1, -1, -1):
            size = 2 ** index
            for bucket in reversed(self.levels[index]):
                yield size, bucket

    def _cut_expected(self, n0: int, n1: int, u0: float, u1: float) -> bool:
        min_length = self.config.min_window_length
        dd = math.log(2 * math.log(self.width) / self.config.delta)
        m = 1.0 / (n0 - min_length + 1) + 1.0 / (n1 - min_length + 1)
        epsilon = math.sqrt(2 * m * self.variance * dd) + 2.0 / 3.0 * dd * m
        return abs(u0 / n0 - u1 / n1) > epsilon

    def _detect_cut(self) -> bool:
        changed = False
        reduce_width = True
        min_length = self.config.min_window_length
        while reduce_width and self.width > self.config.grace_period:
            reduce_width = False
            n0, u0 = 0, 0.0
            n1, u1 = self.width, self.total
            for size, (bucket_total, _) in self._oldest_first():
                n0 += size
                n1 -= size
                u0 += bucket_total
                u1 -= bucket_total
                if n1 <= 0:
                    break
                if n0 >= min_length and n1 >= min_length and self._cut_expected(n0, n1, u0, u1):
                    reduce_width = changed = True
                    self._drop_oldest()
                    break
        return changed

    def _drop_oldest(self) -> None:
        index = len(self.levels) - 1
        size = 2 ** index
        bucket_total, bucket_m2 = self.levels[index].pop()
        self.width -= size
        self.total -= bucket_total
        if self.width > 0:
            gap = bucket_total / size - self.total / self.width
            self.m2 -= bucket_m2 + size * self.width * gap * gap / (size + self.width)
            self.m2 = max(self.m2, 0.0)
        else:
            self.total = 0.0
            self.m2 = 0.0
        while self.levels and not self.levels[-1]:
            self.levels.pop()
