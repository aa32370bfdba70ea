import math
from typing import Literal

from pydantic import Field

from .base import DriftDetector, Verdict, check_binary
from cadrift.pydantic.models import BaseModel


class DdmConfig(BaseModel):
    """
    Drift Detection Method parameters. ``out_control_level`` is the drift
    multiplier on ``s_min``; the published table prints it as 300, which
    would never fire, so the canonical 3.0 is the default.
    """

    kind: Literal["ddm"] = "ddm"
    min_num_instances: int = Field(default=30, ge=1)
    warning_level: float = Field(default=2.0, gt=0)
    out_control_level: float = Field(default=3.0, gt=0)

    def build(self, **hints) -> "DDM":
        return DDM(self)


class DDM(DriftDetector):
    name = "DDM"

    def __init__(self, config: DdmConfig = None):
        super().__init__()
        self.config = config or DdmConfig()
        self.reset()

    def reset(self) -> "DDM":
        super().reset()
        self.n = 0
        self.p = 1.0
        self.s = 0.0
        self.p_min = math.inf
        self.s_min = math.inf
        self.ps_min = math.inf
        return self

    def add_element(self, value) -> Verdict:
        error = check_binary(value)
        self.n += 1
        self.p += (error - self.p) / self.n
        self.s = math.sqrt(self.p * (1 - self.p) / self.n)

        if self.n < self.config.min_num_instances:
            return self._emit(Verdict.NO_CHANGE)

        if self.p + self.s <= self.ps_min:
            self.p_min = self.p
            self.s_min = self.s
            self.ps_min = self.p + self.s

        level = self.p + self.s
        if level > self.p_min + self.config.out_control_level * self.s_min:
            return self._emit(Verdict.DRIFT)
        if level > self.p_min + self.config.warning_level * self.s_min:
            return self._emit(Verdict.WARNING)
        return self._emit(Verdict.NO_CHANGE)
