import math
from typing import Dict, Literal, Optional, Sequence

import numpy as np

from .base import IncrementalLearner
from cadrift import settings
from cadrift.exceptions import NotPreparedError
from cadrift.pydantic.models import BaseModel


class NaiveBayesConfig(BaseModel):
    kind: Literal["nb"] = "nb"
    var_smoothing: float = settings.NB_VARIANCE_FLOOR

    def build(self) -> "GaussianNaiveBayes":
        return GaussianNaiveBayes(self)


class _ClassStats:
    """Welford running mean and squared-deviation sum for one class."""

    __slots__ = ("count", "mean", "m2")

    def __init__(self, d: int):
        self.count = 0
        self.mean = np.zeros(d)
        self.m2 = np.zeros(d)

    def update(self, x: np.ndarray) -> None:
        self.count += 1
        delta = x - self.mean
        self.mean += delta / self.count
        self.m2 += delta * (x - self.mean)

    @property
    def variance(self) -> np.ndarray:
        return self.m2 / self.count


class GaussianNaiveBayes(IncrementalLearner):
    name = "NB"

    def __init__(self, config: NaiveBayesConfig = None):
        self.config = config or NaiveBayesConfig()
        self.reset()

    def reset(self) -> "GaussianNaiveBayes":
        self.classes: Dict[int, _ClassStats] = {}
        self.n_features: Optional[int] = None
        self.n_seen = 0
        return self

    def _checked(self, x: Sequence[float]) -> np.ndarray:
        vector = self._vector(x)
        if self.n_features is not None and vector.shape[0] != self.n_features:
            raise ValueError(f"expected {self.n_features} features, got {vector.shape[0]}")
        return vector

    def partial_fit(self, x: Sequence[float], y: int) -> "GaussianNaiveBayes":
        vector = self._checked(x)
        self.n_features = vector.shape[0]
        label = int(y)
        stats = self.classes.get(label)
        if stats is None:
            stats = self.classes[label] = _ClassStats(self.n_features)
        stats.update(vector)
        self.n_seen += 1
        return self

    def priors(self) -> Dict[int, float]:
        return {label: stats.count / self.n_seen for label, stats in self.classes.items()}

    def joint_log_likelihood(self, x: Sequence[float]) -> Dict[int, float]:
        vector = self._checked(x)
        scores = {}
        for label, stats in self.classes.items():
            variance = stats.variance + self.config.var_smoothing
            log_density = -0.5 * np.sum(np.log(2.0 * np.pi * variance))
            log_density -= 0.5 * np.sum((vector - stats.mean) ** 2 / variance)
            scores[label] = math.log(stats.count / self.n_seen) + float(log_density)
        return scores

    def predict(self, x: Sequence[float]) -> int:
        if not self.n_seen:
            raise NotPreparedError("Naive Bayes has not seen any instance")
        scores = self.joint_log_likelihood(x)
        # lowest label wins ties
        return max(sorted(scores), key=lambda label: scores[label])
