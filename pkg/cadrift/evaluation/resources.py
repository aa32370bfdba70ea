import time
from typing import List

import psutil
from pydantic import Field

from cadrift.pydantic.models import BaseModel


class ResourceSample(BaseModel):
    step: int
    # seconds since the monitor started
    elapsed: float = Field(ge=0)
    # resident set size, bytes
    rss: int = Field(ge=0)


class ResourceMonitor:
    """Samples this process' resident memory every ``every`` steps."""

    def __init__(self, every: int = 1000):
        if every < 1:
            raise ValueError("the sampling cadence must be at least one step")
        self.every = every
        self.samples: List[ResourceSample] = []
        self._process = psutil.Process()
        self._started = time.perf_counter()

    def elapsed(self) -> float:
        return time.perf_counter() - self._started

    def sample(self, step: int) -> ResourceSample:
        sample = ResourceSample(
            step=step,
            elapsed=self.elapsed(),
            rss=self._process.memory_info().rss,
        )
        self.samples.append(sample)
        return sample

    def tick(self, step: int) -> None:
        if step % self.every == 0:
            self.sample(step)
