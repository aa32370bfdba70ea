from abc import ABC, abstractmethod
from typing import ClassVar, Iterable, Sequence, Tuple

import numpy as np


class IncrementalLearner(ABC):
    name: ClassVar[str] = ""

    @staticmethod
    def _vector(x: Sequence[float]) -> np.ndarray:
        vector = np.asarray(x, dtype=float)
        if vector.ndim != 1:
            raise ValueError(f"expected a flat feature vector, got shape {vector.shape}")
        if np.isnan(vector).any():
            raise ValueError("NaN features are not allowed")
        return vector

    @abstractmethod
    def partial_fit(self, x: Sequence[float], y: int) -> "IncrementalLearner":
        ...

    @abstractmethod
    def predict(self, x: Sequence[float]) -> int:
        ...

    @abstractmethod
    def reset(self) -> "IncrementalLearner":
        ...

    def fit_window(self, instances: Iterable[Tuple[Sequence[float], int]]) -> "IncrementalLearner":
        """Forget everything, then train on ``instances`` in order."""
        self.reset()
        for x, y in instances:
            self.partial_fit(x, y)
        return self
