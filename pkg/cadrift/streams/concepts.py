"""
Labeling functions of the synthetic generators.

Feature domains (as numeric vectors):

* ``sine``: 2 uniforms on [0, 1]
* ``sea``: 3 uniforms on [0, 10]; the third is irrelevant
* ``stagger``: size, color, shape, each encoded in {0, 1, 2}
  (small/medium/large, red/green/blue, circle/square/triangle)
* ``mixed``: 2 booleans (0/1) followed by 2 uniforms on [0, 1]
* ``random_tree``: 2 uniforms on [0, 1]
"""
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Dict, Literal, Optional, Tuple, Union

import numpy as np
from pydantic import Field, model_validator

from cadrift.pydantic.models import BaseModel

GeneratorKind = Literal["sine", "random_tree", "mixed", "sea", "stagger"]

N_FEATURES: Dict[str, int] = {
    "sine": 2,
    "random_tree": 2,
    "mixed": 4,
    "sea": 3,
    "stagger": 3,
}

# level counts of generators whose features are all categorical; mixed keeps
# its booleans on numeric bins, each boolean pair being a plane of its own
FEATURE_LEVELS: Dict[str, Tuple[Optional[int], ...]] = {
    "stagger": (3, 3, 3),
}

SEA_THRESHOLDS = (8.0, 9.0, 7.0, 9.5)

VALID_FUNCTIONS: Dict[str, Tuple[int, ...]] = {
    "sine": (1, 2),
    "mixed": (0, 1),
    "sea": (0, 1, 2, 3),
    "stagger": (0, 1, 2),
}

Labeler = Callable[[np.ndarray], int]


class RandomTreeParams(BaseModel):
    max_tree_depth: int = Field(default=6, ge=1)
    min_leaf_depth: int = Field(default=3, ge=0)
    fraction_leaves_per_level: float = Field(default=0.15, ge=0, le=1)

    @model_validator(mode="after")
    def check_depths(self) -> "RandomTreeParams":
        if self.min_leaf_depth > self.max_tree_depth:
            raise ValueError("min_leaf_depth cannot exceed max_tree_depth")
        return self


class ConceptFunction(BaseModel):
    """
    One labeling function. ``function`` picks the variant (SINE1/SINE2,
    SEA 0-3, STAGGER 0-2, MIXED 0-1), ``reversed`` flips sine labels and
    ``seed`` identifies a random tree.
    """

    kind: GeneratorKind
    function: int = 0
    reversed: bool = False
    seed: Optional[int] = None

    @model_validator(mode="after")
    def check_function(self) -> "ConceptFunction":
        if self.kind == "random_tree":
            if self.seed is None:
                raise ValueError("a random_tree concept needs a tree seed")
        elif self.function not in VALID_FUNCTIONS[self.kind]:
            raise ValueError(
                f"{self.kind} supports functions {VALID_FUNCTIONS[self.kind]}, got {self.function}"
            )
        if self.reversed and self.kind != "sine":
            raise ValueError("only sine concepts can be reversed")
        return self

    @property
    def label(self) -> str:
        if self.kind == "random_tree":
            return f"tree{self.seed}"
        prefix = "reversed " if self.reversed else ""
        return f"{prefix}{self.kind.upper()}{self.function}"


@dataclass
class _Leaf:
    label: int


@dataclass
class _Split:
    feature: int
    threshold: float
    left: "_Node"
    right: "_Node"


_Node = Union[_Leaf, _Split]


class RandomTreeModel:
    """
    A random decision tree: internal nodes split a random feature at a
    threshold drawn uniformly on [0, 1], leaves carry random labels. A node
    becomes a leaf at ``max_tree_depth``, or with probability
    ``fraction_leaves_per_level`` once ``min_leaf_depth`` is reached.
    """

    def __init__(self, seed: int, params: RandomTreeParams = None, n_features: int = 2, n_classes: int = 2):
        self.seed = seed
        self.params = params or RandomTreeParams()
        self.n_features = n_features
        self.n_classes = n_classes
        self.root = self._grow(np.random.default_rng(seed), 0)

    def _grow(self, rng: np.random.Generator, depth: int) -> _Node:
        params = self.params
        if depth >= params.max_tree_depth or (
            depth >= params.min_leaf_depth and rng.random() < params.fraction_leaves_per_level
        ):
            return _Leaf(int(rng.integers(self.n_classes)))
        feature = int(rng.integers(self.n_features))
        threshold = float(rng.random())
        return _Split(feature, threshold, self._grow(rng, depth + 1), self._grow(rng, depth + 1))

    def __call__(self, x: np.ndarray) -> int:
        node = self.root
        while isinstance(node, _Split):
            node = node.left if x[node.feature] <= node.threshold else node.right
        return node.label

    def leaf_depths(self):
        pending = [(self.root, 0)]
        while pending:
            node, depth = pending.pop()
            if isinstance(node, _Leaf):
                yield depth
            else:
                pending.extend([(node.left, depth + 1), (node.right, depth + 1)])


@lru_cache(maxsize=64)
def _tree(seed: int, max_tree_depth: int, min_leaf_depth: int, fraction: float) -> RandomTreeModel:
    return RandomTreeModel(
        seed,
        RandomTreeParams(
            max_tree_depth=max_tree_depth,
            min_leaf_depth=min_leaf_depth,
            fraction_leaves_per_level=fraction,
        ),
    )


def random_tree(seed: int, params: RandomTreeParams = None) -> RandomTreeModel:
    params = params or RandomTreeParams()
    return _tree(seed, params.max_tree_depth, params.min_leaf_depth, params.fraction_leaves_per_level)


def _in_unit(values: np.ndarray) -> bool:
    return bool(np.all((values >= 0.0) & (values <= 1.0)))


def check_domain(kind: str, x: np.ndarray) -> None:
    if x.shape != (N_FEATURES[kind],):
        raise ValueError(f"{kind} expects {N_FEATURES[kind]} features, got shape {x.shape}")
    if kind in ("sine", "random_tree"):
        ok = _in_unit(x)
    elif kind == "sea":
        ok = bool(np.all((x >= 0.0) & (x <= 10.0)))
    elif kind == "stagger":
        ok = bool(np.all(np.isin(x, (0.0, 1.0, 2.0))))
    else:
        ok = bool(np.all(np.isin(x[:2], (0.0, 1.0)))) and _in_unit(x[2:])
    if not ok:
        raise ValueError(f"{x.tolist()} is outside the {kind} feature domain")


def sine_boundary(function: int, x1: float) -> float:
    if function == 1:
        return float(np.sin(x1))
    return 0.5 + 0.3 * float(np.sin(3 * np.pi * x1))


def _label(concept: ConceptFunction, x: np.ndarray, tree_params: RandomTreeParams = None) -> int:
    kind = concept.kind
    if kind == "sine":
        label = int(x[1] < sine_boundary(concept.function, x[0]))
        return 1 - label if concept.reversed else label
    if kind == "sea":
        return int(x[0] + x[1] <= SEA_THRESHOLDS[concept.function])
    if kind == "stagger":
        size, color, shape = x
        if concept.function == 0:
            return int(size == 0 and color == 0)
        if concept.function == 1:
            return int(color == 1 or shape == 0)
        return int(size == 1 or size == 2)
    if kind == "mixed":
        votes = int(x[0] == 1) + int(x[1] == 1) + int(x[3] < sine_boundary(2, x[2]))
        label = int(votes >= 2)
        return 1 - label if concept.function == 1 else label
    return random_tree(concept.seed, tree_params)(x)


def label_of(concept: ConceptFunction, x, tree_params: RandomTreeParams = None) -> int:
    """Class of ``x`` under ``concept``; rejects vectors outside the feature domain."""
    vector = np.asarray(x, dtype=float)
    check_domain(concept.kind, vector)
    return _label(concept, vector, tree_params)


def labeler(concept: ConceptFunction, tree_params: RandomTreeParams = None) -> Labeler:
    """Unchecked labeling callable for vectors drawn by ``sample_features``."""
    if concept.kind == "random_tree":
        return random_tree(concept.seed, tree_params)
    return lambda x: _label(concept, x, tree_params)


def sample_features(kind: str, rng: np.random.Generator) -> np.ndarray:
    if kind in ("sine", "random_tree"):
        return rng.random(2)
    if kind == "sea":
        return rng.random(3) * 10.0
    if kind == "stagger":
        return rng.integers(0, 3, size=3).astype(float)
    booleans = rng.integers(0, 2, size=2).astype(float)
    return np.concatenate([booleans, rng.random(2)])
