import bisect
import logging
from typing import List, Literal, Optional

import numpy as np
from pydantic import Field, model_validator
from scipy.special import expit

from .concepts import (
    FEATURE_LEVELS,
    N_FEATURES,
    ConceptFunction,
    RandomTreeParams,
    labeler,
    sample_features,
)
from .stream import Stream
from cadrift.pydantic.models import BaseModel

logger = logging.getLogger(__name__)

MAX_BALANCE_ATTEMPTS = 10000


class StreamSpec(BaseModel):
    """
    Declarative synthetic drifting stream: ``concepts`` take turns at the
    ``positions`` (segment starts for abrupt drifts, transition centers for
    gradual ones).
    """

    source: Literal["generator"] = "generator"
    name: str
    concepts: List[ConceptFunction] = Field(min_length=1)
    drift_kind: Literal["abrupt", "gradual"] = "abrupt"
    positions: List[int] = []
    width: int = Field(default=1000, ge=1)
    length: int = Field(default=40000, ge=1)
    noise: float = Field(default=0.0, ge=0, le=1)
    seed: int = 1
    balance_classes: bool = False
    # grid bins per dimension CURIE should use on this stream
    bins: int = Field(default=10, ge=2)
    concept_size: Optional[int] = Field(default=None, ge=1)
    tree: RandomTreeParams = RandomTreeParams()

    @model_validator(mode="after")
    def check_schedule(self) -> "StreamSpec":
        if len(self.concepts) != len(self.positions) + 1:
            raise ValueError(
                f"{len(self.concepts)} concepts need {len(self.concepts) - 1} drift positions, "
                f"got {len(self.positions)}"
            )
        if any(b <= a for a, b in zip(self.positions, self.positions[1:])):
            raise ValueError("drift positions must be strictly increasing")
        if any(not 0 < p < self.length for p in self.positions):
            raise ValueError(f"drift positions must lie inside (0, {self.length})")
        if len({c.kind for c in self.concepts}) != 1:
            raise ValueError("all concepts of a stream must come from the same generator")
        return self

    @property
    def generator(self) -> str:
        return self.concepts[0].kind

    @property
    def n_features(self) -> int:
        return N_FEATURES[self.generator]

    @property
    def effective_concept_size(self) -> int:
        return self.concept_size or self.length // len(self.concepts)

    @property
    def label(self) -> str:
        return self.name

    def load(self, seed: Optional[int] = None) -> Stream:
        return generate(self, seed)

    def new_concept_probability(self, t: int, drift: int) -> float:
        """Chance that step ``t`` already follows the concept after ``drift``."""
        center = self.positions[drift]
        if self.drift_kind == "abrupt":
            return 1.0 if t >= center else 0.0
        return float(expit(4.0 * (t - center) / self.width))


def active_concept(spec: StreamSpec, t: int, rng: np.random.Generator) -> int:
    if spec.drift_kind == "abrupt":
        return bisect.bisect_right(spec.positions, t)
    index = 0
    for drift in range(len(spec.positions)):
        if rng.random() >= spec.new_concept_probability(t, drift):
            break
        index = drift + 1
    return index


def generate(spec: StreamSpec, seed: Optional[int] = None) -> Stream:
    """
    Draw ``spec.length`` instances. Every random choice comes from one
    generator seeded with ``seed`` (or ``spec.seed``), so equal inputs give
    identical streams.
    """
    seed = spec.seed if seed is None else seed
    rng = np.random.default_rng(seed)
    kind = spec.generator
    labelers = [labeler(concept, spec.tree) for concept in spec.concepts]
    X = np.empty((spec.length, spec.n_features))
    y = np.empty(spec.length, dtype=np.int64)
    concepts = np.empty(spec.length, dtype=np.int64)

    for t in range(spec.length):
        index = active_concept(spec, t, rng)
        label_fn = labelers[index]
        x = sample_features(kind, rng)
        label = label_fn(x)
        if spec.balance_classes:
            desired = int(rng.integers(2))
            attempts = 1
            while label != desired:
                if attempts >= MAX_BALANCE_ATTEMPTS:
                    raise RuntimeError(
                        f"{spec.concepts[index].label} never produced class {desired}"
                    )
                x = sample_features(kind, rng)
                label = label_fn(x)
                attempts += 1
        if spec.noise and rng.random() < spec.noise:
            label = 1 - label
        X[t] = x
        y[t] = label
        concepts[t] = index

    logger.debug("Generated %s (%d instances, seed %d)", spec.name, spec.length, seed)
    return Stream(
        X=X,
        y=y,
        name=spec.name,
        drift_positions=tuple(spec.positions),
        drift_kind=spec.drift_kind,
        concept_size=spec.effective_concept_size,
        bins=spec.bins,
        levels=FEATURE_LEVELS.get(kind),
        seed=seed,
        concepts=concepts,
    )
