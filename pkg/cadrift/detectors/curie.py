"""
CURIE: drift detection on a cellular automaton.

The detector keeps a grid over the feature space whose cell states are class
labels. Each labeled instance overwrites the state of its cell; when that
changes the state (a mutation) the detector counts how many von Neumann
neighbours within ``radius_mut`` also mutated during the last
``mutation_period`` steps. Reaching ``n_muts_allowed`` declares a drift, after
which the grid is rebuilt from the sliding window of recent instances.

It never looks at a base learner's predictions, only at ``(x, y)``.
"""
import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Deque, Iterable, List, Literal, Optional, Sequence, Tuple

import numpy as np
from pydantic import AliasChoices, Field

from .base import DriftDetector, Verdict
from cadrift import settings
from cadrift.exceptions import NotPreparedError
from cadrift.grid import UNASSIGNED, Coords, Grid, GridConfig
from cadrift.pydantic.models import BaseModel

logger = logging.getLogger(__name__)

DEFAULT_BINS = 10

LabeledVector = Tuple[np.ndarray, int]


def _as_pair(item) -> Tuple[Sequence[float], int]:
    if hasattr(item, "x") and hasattr(item, "y"):
        return item.x, item.y
    x, y = item
    return x, y


class CurieConfig(BaseModel):
    kind: Literal["curie"] = "curie"
    # None: take the bin count recommended by the stream (or DEFAULT_BINS).
    bins_per_dim: Optional[int] = Field(default=None, ge=2)
    radius: int = Field(default=2, ge=1)
    radius_mut: int = Field(default=2, ge=1)
    mutation_period: int = Field(default=10, ge=1)
    n_muts_allowed: int = Field(
        default=2,
        ge=1,
        validation_alias=AliasChoices("n_muts_allowed", "num_mutants_neighbors"),
    )
    prep_size: int = Field(default=settings.DEFAULT_PREP_SIZE, ge=1)
    state_alphabet: Tuple[int, ...] = (0, 1)
    # None: categorical axes are taken from the stream, if it declares any.
    levels: Optional[Tuple[Optional[int], ...]] = None

    def grid_config(self, d: int) -> GridConfig:
        return GridConfig(
            d=d,
            bins_per_dim=self.bins_per_dim or DEFAULT_BINS,
            radius=self.radius,
            state_alphabet=self.state_alphabet,
            levels=self.levels,
        )

    def build(
        self,
        bins_per_dim: Optional[int] = None,
        levels: Optional[Sequence[Optional[int]]] = None,
        **hints,
    ) -> "CurieDetector":
        update = {}
        if self.bins_per_dim is None and bins_per_dim is not None:
            update["bins_per_dim"] = bins_per_dim
        if self.levels is None and levels is not None:
            update["levels"] = tuple(levels)
        config = self.model_copy(update=update) if update else self
        return CurieDetector(config)


@dataclass
class Trigger:
    t: int
    cell: Coords
    mutant_neighbors: List[Tuple[Coords, int]] = field(default_factory=list)


class CurieDetector(DriftDetector):
    name = "CURIE"
    consumes_instances = True

    def __init__(self, config: CurieConfig = None):
        super().__init__()
        self.config = config or CurieConfig()
        self.grid: Optional[Grid] = None
        self.window: Deque[LabeledVector] = deque(maxlen=self.config.prep_size)
        self._clock = 0
        self.last_trigger: Optional[Trigger] = None
        self.snapshot_on_drift = False
        self.drift_snapshot = None

    @property
    def prepared(self) -> bool:
        return self.grid is not None

    @property
    def clock(self) -> int:
        """Index of the next instance ``update`` will process."""
        return self._clock

    @clock.setter
    def clock(self, value: int) -> None:
        if value < self._clock:
            raise ValueError(f"the clock cannot go back from {self._clock} to {value}")
        self._clock = int(value)

    def _labeled(self, x: Sequence[float], y: int) -> LabeledVector:
        vector = np.asarray(x, dtype=float)
        if np.isnan(vector).any():
            raise ValueError("NaN features are not allowed")
        label = int(y)
        if label not in self.config.state_alphabet:
            raise ValueError(
                f"label {label} is not in the state alphabet {self.config.state_alphabet}"
            )
        return vector, label

    def _seed(self, instances: Sequence[LabeledVector]) -> Grid:
        if not instances:
            raise ValueError("the preparatory set is empty")
        d = len(instances[0][0])
        grid = Grid(self.config.grid_config(d))
        for vector, _ in instances:
            grid.expand_limits(vector)
        grid.limits.open_degenerate()
        for vector, label in instances:
            grid.record_hit(grid.locate_cell(vector), label)
        grid.resolve_states()
        grid.evolve_until_full(self.config.radius)
        grid.resolve_states()
        return grid

    def prepare(self, instances: Iterable) -> "CurieDetector":
        """
        Seed the grid from preparatory instances, given as ``(x, y)`` pairs or
        objects with ``x`` and ``y`` attributes. The clock advances past them.
        """
        data = [self._labeled(*_as_pair(item)) for item in instances]
        self.grid = self._seed(data)
        self.window.clear()
        self.window.extend(data)
        self._clock += len(data)
        return self

    def predict(self, x: Sequence[float]) -> int:
        if self.grid is None:
            raise NotPreparedError("CURIE must be prepared before predicting")
        return self.grid.state(self.grid.locate_cell(x))

    def mutant_neighbors(self, coords: Coords, t: int) -> List[Tuple[Coords, int]]:
        """Neighbours whose latest mutation falls in ``(t - mutation_period, t)``."""
        period = self.config.mutation_period
        found = []
        for neighbor in self.grid.neighbors(coords, self.config.radius_mut):
            last = int(self.grid.last_mutation[neighbor])
            if last != UNASSIGNED and t - period < last < t:
                found.append((neighbor, last))
        return found

    def update(self, x: Sequence[float], y: int) -> Verdict:
        if self.grid is None:
            raise NotPreparedError("CURIE must be prepared before it is updated")
        vector, label = self._labeled(x, y)
        t = self._clock
        self.window.append((vector, label))
        self.grid.expand_limits(vector)
        coords = self.grid.locate_cell(vector)
        current = self.grid.state(coords)
        self.grid.set_state(coords, label)

        verdict = Verdict.NO_CHANGE
        if current != label:
            self.grid.record_mutation(coords, t)
            mutants = self.mutant_neighbors(coords, t)
            if len(mutants) >= self.config.n_muts_allowed:
                self.last_trigger = Trigger(t=t, cell=coords, mutant_neighbors=mutants)
                if self.snapshot_on_drift:
                    from cadrift.snapshot import detector_snapshot

                    self.drift_snapshot = detector_snapshot(self)
                logger.debug(
                    "Drift at t=%d in cell %s (%d mutant neighbours)",
                    t,
                    list(coords),
                    len(mutants),
                )
                self.reset_and_reseed()
                verdict = Verdict.DRIFT
        self._clock = t + 1
        return self._emit(verdict)

    def add_element(self, value: Tuple[Sequence[float], int]) -> Verdict:
        x, y = value
        return self.update(x, y)

    def reset_and_reseed(self) -> "CurieDetector":
        self.grid = self._seed(list(self.window))
        logger.debug("Grid reseeded from %d window instances", len(self.window))
        return self

    def reset(self) -> "CurieDetector":
        super().reset()
        self.grid = None
        self.window.clear()
        self._clock = 0
        self.last_trigger = None
        self.drift_snapshot = None
        return self
