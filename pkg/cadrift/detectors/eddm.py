import math
from typing import Literal

from pydantic import Field

from .base import DriftDetector, Verdict, check_binary
from cadrift.pydantic.models import BaseModel


class EddmConfig(BaseModel):
    kind: Literal["eddm"] = "eddm"
    min_num_instances: int = Field(default=30, ge=1)
    min_num_errors: int = Field(default=30, ge=2)
    warning_level: float = Field(default=0.95, gt=0, le=1)
    out_control_level: float = Field(default=0.9, gt=0, le=1)

    def build(self, **hints) -> "EDDM":
        return EDDM(self)


class EDDM(DriftDetector):
    """
    Early Drift Detection Method: tracks the mean and spread of the distance
    (in steps) between consecutive errors and compares ``mean + 2 * std``
    with its historical maximum.
    """

    name = "EDDM"

    def __init__(self, config: EddmConfig = None):
        super().__init__()
        self.config = config or EddmConfig()
        self.reset()

    def reset(self) -> "EDDM":
        super().reset()
        self.n = 0
        self.n_errors = 0
        self.last_error_at = 0
        self.mean_distance = 0.0
        self.m2 = 0.0
        self.m2s_max = 0.0
        return self

    @property
    def std_distance(self) -> float:
        return math.sqrt(self.m2 / self.n_errors) if self.n_errors else 0.0

    def add_element(self, value) -> Verdict:
        error = check_binary(value)
        self.n += 1
        if not error:
            return self._emit(Verdict.NO_CHANGE)

        self.n_errors += 1
        distance = self.n - self.last_error_at
        self.last_error_at = self.n
        old_mean = self.mean_distance
        self.mean_distance += (distance - old_mean) / self.n_errors
        self.m2 += (distance - self.mean_distance) * (distance - old_mean)
        m2s = self.mean_distance + 2.0 * self.std_distance

        if self.n < self.config.min_num_instances or self.n_errors < 2:
            return self._emit(Verdict.NO_CHANGE)
        if m2s > self.m2s_max:
            self.m2s_max = m2s
            return self._emit(Verdict.NO_CHANGE)
        if self.n_errors <= self.config.min_num_errors:
            return self._emit(Verdict.NO_CHANGE)

        ratio = m2s / self.m2s_max
        if ratio < self.config.out_control_level:
            return self._emit(Verdict.DRIFT)
        if ratio < self.config.warning_level:
            return self._emit(Verdict.WARNING)
        return self._emit(Verdict.NO_CHANGE)
