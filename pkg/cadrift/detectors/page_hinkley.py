from typing import Literal

from pydantic import Field

from .base import DriftDetector, Verdict, check_finite
from cadrift.pydantic.models import BaseModel


class PageHinkleyConfig(BaseModel):
    kind: Literal["ph"] = "ph"
    min_instances: int = Field(default=30, ge=1)
    delta: float = Field(default=0.005, ge=0)
    threshold: float = Field(default=50.0, gt=0)
    alpha: float = Field(default=1 - 0.0001, gt=0, le=1)

    def build(self, **hints) -> "PageHinkley":
        return PageHinkley(self)


class PageHinkley(DriftDetector):
    """
    Page-Hinkley test for an increase of the mean. ``cumulative`` is the
    forgetting-weighted sum of ``x - mean - delta``, ``minimum`` its running
    minimum; a drift is declared when their gap exceeds ``threshold``.
    """

    name = "PH"

    def __init__(self, config: PageHinkleyConfig = None):
        super().__init__()
        self.config = config or PageHinkleyConfig()
        self.reset()

    def reset(self) -> "PageHinkley":
        super().reset()
        self.n = 0
        self.mean = 0.0
        self.cumulative = 0.0
        self.minimum = 0.0
        return self

    @property
    def statistic(self) -> float:
        return self.cumulative - self.minimum

    def add_element(self, value) -> Verdict:
        x = check_finite(value)
        self.n += 1
        self.mean += (x - self.mean) / self.n
        self.cumulative = self.config.alpha * self.cumulative + (x - self.mean - self.config.delta)
        self.minimum = min(self.minimum, self.cumulative)

        if self.n < self.config.min_instances:
            return self._emit(Verdict.NO_CHANGE)
        if self.statistic > self.config.threshold:
            return self._emit(Verdict.DRIFT)
        return self._emit(Verdict.NO_CHANGE)
