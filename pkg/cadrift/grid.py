"""
Cellular automaton substrate for drift detection.

The feature space is cut into ``bins_per_dim`` evenly spaced bins per
dimension; a categorical axis gets one bin per level instead. Every cell of
the resulting lattice holds a class label (its state), the labels of the
instances that seeded it and the times it mutated. Storage is dense (one
entry per cell), which keeps lookups O(d) but grows exponentially with the
number of features: use low-dimensional inputs.
"""
import itertools
import logging
from collections import Counter, deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Deque, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import Field, field_validator, model_validator

from cadrift import settings
from cadrift.pydantic.models import BaseModel

logger = logging.getLogger(__name__)

UNASSIGNED = -1

Coords = Tuple[int, ...]


class GridConfig(BaseModel):
    d: int = Field(ge=1)
    bins_per_dim: int = Field(ge=2)
    radius: int = Field(default=1, ge=1)
    state_alphabet: Tuple[int, ...] = (0, 1)
    # level count of each categorical axis, None for numeric ones
    levels: Optional[Tuple[Optional[int], ...]] = None

    @field_validator("state_alphabet")
    @classmethod
    def check_alphabet(cls, value: Tuple[int, ...]) -> Tuple[int, ...]:
        if len(value) < 2:
            raise ValueError("the state alphabet needs at least two labels")
        if len(set(value)) != len(value):
            raise ValueError("state alphabet labels must be unique")
        if any(label < 0 for label in value):
            raise ValueError("class labels must be non-negative integers")
        return value

    @model_validator(mode="after")
    def check_levels(self) -> "GridConfig":
        if self.levels is None:
            return self
        if len(self.levels) != self.d:
            raise ValueError(f"expected levels for {self.d} axes, got {len(self.levels)}")
        if any(level is not None and level < 2 for level in self.levels):
            raise ValueError("a categorical axis needs at least two levels")
        return self

    @property
    def shape(self) -> Tuple[int, ...]:
        levels = self.levels or (None,) * self.d
        return tuple(self.bins_per_dim if level is None else level for level in levels)

    @property
    def categorical(self) -> Tuple[bool, ...]:
        return tuple(level is not None for level in self.levels or (None,) * self.d)

    @property
    def n_cells(self) -> int:
        return int(np.prod(self.shape))


class DimensionLimits:
    """Per-dimension [low, high] range the bins are spread over."""

    def __init__(self, d: int):
        self.low = np.full(d, np.inf)
        self.high = np.full(d, -np.inf)

    @classmethod
    def from_bounds(cls, low: Sequence[float], high: Sequence[float]) -> "DimensionLimits":
        limits = cls(len(low))
        limits.low = np.asarray(low, dtype=float).copy()
        limits.high = np.asarray(high, dtype=float).copy()
        return limits

    @property
    def initialized(self) -> bool:
        return bool(np.all(np.isfinite(self.low)) and np.all(np.isfinite(self.high)))

    def expand(self, x: np.ndarray) -> None:
        np.minimum(self.low, x, out=self.low)
        np.maximum(self.high, x, out=self.high)

    def open_degenerate(self, epsilon: float = settings.DEGENERATE_LIMIT_EPSILON) -> None:
        flat = self.low >= self.high
        if flat.any():
            self.low[flat] -= epsilon
            self.high[flat] += epsilon

    def copy(self) -> "DimensionLimits":
        return DimensionLimits.from_bounds(self.low, self.high)


@dataclass
class Cell:
    coords: Coords
    state: Optional[int]
    hit_history: List[int] = field(default_factory=list)
    mutation_times: List[int] = field(default_factory=list)


@lru_cache(maxsize=None)
def manhattan_offsets(d: int, radius: int) -> Tuple[Coords, ...]:
    """Non-zero offsets of the von Neumann ball, in lexicographic order."""
    span = range(-radius, radius + 1)
    return tuple(
        offset
        for offset in itertools.product(span, repeat=d)
        if 0 < sum(abs(o) for o in offset) <= radius
    )


def majority_vote(
    states: Iterable[Optional[int]],
    current: Optional[int] = None,
    alphabet: Sequence[int] = (0, 1),
) -> Optional[int]:
    """
    Most frequent assigned label in ``states``. On ties the current state is
    kept when it is one of the tied labels, otherwise the label listed first
    in ``alphabet`` wins. Returns ``None`` when no state is assigned.
    """
    votes = Counter(s for s in states if s is not None and s != UNASSIGNED)
    if not votes:
        return None
    best = max(votes.values())
    tied = [label for label, count in votes.items() if count == best]
    if current is not None and current in tied:
        return current
    order = {label: index for index, label in enumerate(alphabet)}
    return min(tied, key=lambda label: order.get(label, len(order)))


def modal_label(history: Sequence[int]) -> Optional[int]:
    """Most frequent label; ties go to the label hit most recently."""
    if not history:
        return None
    counts = Counter(history)
    best = max(counts.values())
    for label in reversed(history):
        if counts[label] == best:
            return label
    return None  # unreachable


class Grid:
    def __init__(self, config: GridConfig, limits: Optional[DimensionLimits] = None):
        self.config = config
        if config.n_cells > settings.DENSE_GRID_WARNING_CELLS:
            logger.warning(
                "Grid with %d cells (shape %s) is stored densely; "
                "prefer streams with few features",
                config.n_cells,
                "x".join(str(b) for b in config.shape),
            )
        self.limits = limits if limits is not None else DimensionLimits(config.d)
        self.states = np.full(config.shape, UNASSIGNED, dtype=np.int64)
        self.last_mutation = np.full(config.shape, UNASSIGNED, dtype=np.int64)
        self._hits: Dict[Coords, List[int]] = {}
        self._mutations: Dict[Coords, Deque[int]] = {}
        self._bins = np.asarray(config.shape, dtype=np.int64)
        self._categorical = np.asarray(config.categorical, dtype=bool)

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.config.shape

    def _check_vector(self, x: Sequence[float]) -> np.ndarray:
        vector = np.asarray(x, dtype=float)
        if vector.shape != (self.config.d,):
            raise ValueError(
                f"expected {self.config.d} features, got shape {vector.shape}"
            )
        if np.isnan(vector).any():
            raise ValueError("NaN features are not allowed")
        return vector

    def in_bounds(self, coords: Coords) -> bool:
        return len(coords) == self.config.d and all(
            0 <= c < b for c, b in zip(coords, self.shape)
        )

    # Geometry

    def expand_limits(self, x: Sequence[float]) -> "Grid":
        vector = self._check_vector(x)
        self.limits.expand(vector)
        return self

    def locate_cell(self, x: Sequence[float]) -> Coords:
        vector = self._check_vector(x)
        if not self.limits.initialized:
            raise ValueError("grid limits are not initialized")
        bins = self._bins
        span = self.limits.high - self.limits.low
        with np.errstate(divide="ignore", invalid="ignore"):
            position = np.where(span > 0, (vector - self.limits.low) / span, 0.0)
        index = np.floor(position * bins)
        # categorical values snap to the nearest level
        index = np.where(self._categorical, np.rint(position * (bins - 1)), index)
        index = np.clip(index, 0, bins - 1).astype(np.int64)
        return tuple(int(i) for i in index)

    def neighbors(self, coords: Coords, radius: Optional[int] = None) -> List[Coords]:
        radius = self.config.radius if radius is None else radius
        shape = self.shape
        found = []
        for offset in manhattan_offsets(self.config.d, radius):
            candidate = tuple(c + o for c, o in zip(coords, offset))
            if all(0 <= c < b for c, b in zip(candidate, shape)):
                found.append(candidate)
        return found

    # Cell bookkeeping

    def state(self, coords: Coords) -> Optional[int]:
        value = int(self.states[coords])
        return None if value == UNASSIGNED else value

    def set_state(self, coords: Coords, label: int) -> None:
        self.states[coords] = label

    def record_hit(self, coords: Coords, label: int) -> "Grid":
        self._hits.setdefault(coords, []).append(label)
        return self

    def record_mutation(self, coords: Coords, t: int) -> None:
        last = int(self.last_mutation[coords])
        if last != UNASSIGNED and t <= last:
            raise ValueError(
                f"mutation at t={t} is not after the last one (t={last}) in cell {list(coords)}"
            )
        self.last_mutation[coords] = t
        log = self._mutations.get(coords)
        if log is None:
            log = self._mutations[coords] = deque(maxlen=settings.MUTATION_LOG_LENGTH)
        log.append(t)

    def hit_history(self, coords: Coords) -> List[int]:
        return list(self._hits.get(coords, ()))

    def mutation_times(self, coords: Coords) -> List[int]:
        return list(self._mutations.get(coords, ()))

    def cell(self, coords: Coords) -> Cell:
        return Cell(
            coords=tuple(coords),
            state=self.state(coords),
            hit_history=self.hit_history(coords),
            mutation_times=self.mutation_times(coords),
        )

    def cells(self) -> Iterator[Cell]:
        for coords in np.ndindex(*self.shape):
            yield self.cell(coords)

    @property
    def unassigned_count(self) -> int:
        return int(np.count_nonzero(self.states == UNASSIGNED))

    @property
    def is_full(self) -> bool:
        return self.unassigned_count == 0

    # Local rule and generations

    def rule_at(self, coords: Coords, radius: Optional[int] = None) -> Optional[int]:
        """Majority vote of the radius-``radius`` neighbours of one cell."""
        return majority_vote(
            (self.state(n) for n in self.neighbors(coords, radius)),
            current=self.state(coords),
            alphabet=self.config.state_alphabet,
        )

    def resolve_states(self) -> "Grid":
        for coords, history in self._hits.items():
            label = modal_label(history)
            if label is not None:
                self.states[coords] = label
        return self

    def step(self, radius: Optional[int] = None) -> int:
        """
        One synchronous generation over the unassigned cells. Every cell reads
        the pre-generation states; assigned cells are left untouched. Returns
        how many cells got a state.
        """
        radius = self.config.radius if radius is None else radius
        unassigned = self.states == UNASSIGNED
        if not unassigned.any():
            return 0
        alphabet = np.asarray(self.config.state_alphabet, dtype=np.int64)
        padded = np.pad(self.states, radius, constant_values=UNASSIGNED)
        counts = np.zeros((len(alphabet),) + self.shape, dtype=np.int64)
        for offset in manhattan_offsets(self.config.d, radius):
            window = padded[
                tuple(slice(radius + o, radius + o + b) for o, b in zip(offset, self.shape))
            ]
            for index, label in enumerate(alphabet):
                counts[index] += window == label
        # argmax keeps the first maximum, i.e. the lowest alphabet index on ties
        winner = alphabet[counts.argmax(axis=0)]
        decided = unassigned & (counts.max(axis=0) > 0)
        updated = self.states.copy()
        updated[decided] = winner[decided]
        self.states = updated
        return int(np.count_nonzero(decided))

    def evolve_until_full(self, radius: Optional[int] = None) -> int:
        """Run generations until every cell is assigned; returns how many ran."""
        if self.unassigned_count == self.config.n_cells:
            raise ValueError("cannot evolve a grid with no assigned cell")
        cap = sum(self.shape)
        generations = 0
        while not self.is_full:
            if generations >= cap:
                raise RuntimeError(
                    f"{self.unassigned_count} cells still unassigned after {cap} generations"
                )
            self.step(radius)
            generations += 1
        return generations
