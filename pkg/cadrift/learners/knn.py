from collections import Counter, deque
from typing import Deque, Literal, Sequence, Tuple

import numpy as np
from pydantic import Field

from .base import IncrementalLearner
from cadrift import settings
from cadrift.exceptions import NotPreparedError
from cadrift.pydantic.models import BaseModel


class KnnConfig(BaseModel):
    kind: Literal["knn"] = "knn"
    n_neighbors: int = Field(default=5, ge=1)
    max_window_size: int = Field(default=settings.DEFAULT_PREP_SIZE, ge=1)

    def build(self) -> "SlidingWindowKNN":
        return SlidingWindowKNN(self)


class SlidingWindowKNN(IncrementalLearner):
    """
    k nearest neighbours (Euclidean) over the last ``max_window_size``
    instances. Distance ties go to the older instance, vote ties to the
    lowest label.
    """

    name = "KNN"

    def __init__(self, config: KnnConfig = None):
        self.config = config or KnnConfig()
        self.reset()

    def reset(self) -> "SlidingWindowKNN":
        self.window: Deque[Tuple[np.ndarray, int]] = deque(maxlen=self.config.max_window_size)
        return self

    def partial_fit(self, x: Sequence[float], y: int) -> "SlidingWindowKNN":
        vector = self._vector(x)
        if self.window and vector.shape != self.window[0][0].shape:
            raise ValueError(
                f"expected {self.window[0][0].shape[0]} features, got {vector.shape[0]}"
            )
        self.window.append((vector, int(y)))
        return self

    def predict(self, x: Sequence[float]) -> int:
        if not self.window:
            raise NotPreparedError("KNN window is empty")
        vector = self._vector(x)
        points = np.stack([point for point, _ in self.window])
        labels = [label for _, label in self.window]
        distances = np.linalg.norm(points - vector, axis=1)
        k = min(self.config.n_neighbors, len(labels))
        nearest = np.argsort(distances, kind="stable")[:k]
        votes = Counter(labels[i] for i in nearest)
        best = max(votes.values())
        return min(label for label, count in votes.items() if count == best)
