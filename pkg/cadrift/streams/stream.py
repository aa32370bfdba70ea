from dataclasses import dataclass, field
from typing import Iterator, NamedTuple, Optional, Tuple

import numpy as np


class Instance(NamedTuple):
    x: np.ndarray
    y: int
    t: int


@dataclass
class Stream:
    """
    A finite labeled stream held as arrays. Indexing and iteration yield
    ``Instance`` objects; drift metadata travels with the data so the
    harness can score detections.
    """

    X: np.ndarray
    y: np.ndarray
    name: str = ""
    drift_positions: Tuple[int, ...] = ()
    drift_kind: str = "abrupt"
    concept_size: Optional[int] = None
    bins: Optional[int] = None
    # level count per feature for categorical ones, None for numeric
    levels: Optional[Tuple[Optional[int], ...]] = None
    seed: Optional[int] = None
    # index of the concept that produced each label, when known
    concepts: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self):
        self.X = np.asarray(self.X, dtype=float)
        self.y = np.asarray(self.y, dtype=np.int64)
        if self.X.ndim != 2 or self.X.shape[0] != self.y.shape[0]:
            raise ValueError(
                f"features {self.X.shape} and labels {self.y.shape} do not line up"
            )

    def __len__(self) -> int:
        return int(self.y.shape[0])

    def __getitem__(self, t: int) -> Instance:
        return Instance(self.X[t], int(self.y[t]), t)

    def __iter__(self) -> Iterator[Instance]:
        for t in range(len(self)):
            yield self[t]

    @property
    def n_features(self) -> int:
        return int(self.X.shape[1])
