import math
from abc import ABC, abstractmethod
from enum import Enum
from typing import Any, ClassVar

import numpy as np

from cadrift import settings


class Verdict(str, Enum):
    NO_CHANGE = "no-change"
    WARNING = "warning"
    DRIFT = "drift"


class SignalMapping:
    """
    Translates between the value the harness puts on the wire for a
    prediction and the error bit detectors consume (``settings.ERROR_SIGNAL``).

    ``canonical`` sends 1 on a misclassification; ``literal`` sends 0, as the
    learning-detection loop is usually written in pseudocode.
    """

    CONVENTIONS = ("canonical", "literal")

    def __init__(self, convention: str = "canonical"):
        if convention not in self.CONVENTIONS:
            raise ValueError(f"Unknown signal convention '{convention}'")
        self.convention = convention
        self.error_value = settings.ERROR_SIGNAL if convention == "canonical" else 1 - settings.ERROR_SIGNAL

    def encode(self, misclassified: bool) -> int:
        return self.error_value if misclassified else 1 - self.error_value

    def decode(self, value: int) -> int:
        """Wire value -> detector input, where ``ERROR_SIGNAL`` means error."""
        is_error = value == self.error_value
        return settings.ERROR_SIGNAL if is_error else 1 - settings.ERROR_SIGNAL


class DriftDetector(ABC):
    """
    Uniform streaming interface: feed one element, read the verdict, poll
    ``detected_change`` (edge-triggered), ``reset`` after a detection.
    """

    name: ClassVar[str] = ""
    # Detectors that learn from (x, y) directly instead of an error signal.
    consumes_instances: ClassVar[bool] = False

    def __init__(self) -> None:
        self._change = False
        self._warning = False

    def _emit(self, verdict: Verdict) -> Verdict:
        self._change = verdict is Verdict.DRIFT
        self._warning = verdict is Verdict.WARNING
        return verdict

    def detected_change(self) -> bool:
        change, self._change = self._change, False
        return change

    def detected_warning(self) -> bool:
        return self._warning

    @abstractmethod
    def add_element(self, value: Any) -> Verdict:
        ...

    def reset(self) -> "DriftDetector":
        self._change = False
        self._warning = False
        return self


def check_binary(value: Any) -> int:
    if isinstance(value, (bool, int, float, np.bool_, np.integer, np.floating)) and value in (0, 1):
        return int(value)
    raise ValueError(f"expected a binary error signal, got {value!r}")


def check_finite(value: Any) -> float:
    try:
        x = float(value)
    except (TypeError, ValueError):
        raise ValueError(f"expected a real-valued signal, got {value!r}") from None
    if not math.isfinite(x):
        raise ValueError(f"expected a finite signal, got {value!r}")
    return x
