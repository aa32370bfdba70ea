"""The 20 drifting streams of the comparative protocol (10 abrupt, 10 gradual)."""
from typing import Dict, List

from .concepts import ConceptFunction
from .generator import StreamSpec

ABRUPT_POSITIONS = [10000, 20000, 30000]
GRADUAL_POSITIONS = [9500, 20000, 30500]
GRADUAL_WIDTH = 1000
LENGTH = 40000
CONCEPT_SIZE = 10000

SINE1 = ConceptFunction(kind="sine", function=1)
REVERSED_SINE1 = ConceptFunction(kind="sine", function=1, reversed=True)
SINE2 = ConceptFunction(kind="sine", function=2)
REVERSED_SINE2 = ConceptFunction(kind="sine", function=2, reversed=True)

TREE_SEEDS = [8873, 9856, 7896, 2563]

# family -> (concept orders F1 and F2, bins, noise, balance)
FAMILIES: Dict[str, dict] = {
    "Sine": {
        "orders": (
            [SINE1, REVERSED_SINE1, SINE2, REVERSED_SINE2],
            [REVERSED_SINE2, SINE2, REVERSED_SINE1, SINE1],
        ),
        "bins": 20,
        "noise": 0.0,
        "balance": True,
    },
    "RT": {
        "orders": (
            [ConceptFunction(kind="random_tree", seed=s) for s in TREE_SEEDS],
            [ConceptFunction(kind="random_tree", seed=s) for s in reversed(TREE_SEEDS)],
        ),
        "bins": 20,
        "noise": 0.0,
        "balance": True,
    },
    "Mixed": {
        "orders": (
            [ConceptFunction(kind="mixed", function=f) for f in (0, 1, 0, 1)],
            [ConceptFunction(kind="mixed", function=f) for f in (1, 0, 1, 0)],
        ),
        "bins": 10,
        "noise": 0.0,
        "balance": True,
    },
    "Sea": {
        "orders": (
            [ConceptFunction(kind="sea", function=f) for f in (0, 1, 2, 3)],
            [ConceptFunction(kind="sea", function=f) for f in (3, 2, 1, 0)],
        ),
        "bins": 10,
        "noise": 0.2,
        "balance": True,
    },
    "Stagger": {
        "orders": (
            [ConceptFunction(kind="stagger", function=f) for f in (0, 1, 2, 0)],
            [ConceptFunction(kind="stagger", function=f) for f in (2, 1, 0, 2)],
        ),
        "bins": 10,
        "noise": 0.0,
        "balance": True,
    },
}


def family_spec(family: str, drift_kind: str, order: int, seed: int = 1) -> StreamSpec:
    """``family_spec("Sine", "abrupt", 1)`` is Sine_A_F1."""
    setup = FAMILIES[family]
    gradual = drift_kind == "gradual"
    return StreamSpec(
        name=f"{family}_{'G' if gradual else 'A'}_F{order}",
        concepts=setup["orders"][order - 1],
        drift_kind=drift_kind,
        positions=GRADUAL_POSITIONS if gradual else ABRUPT_POSITIONS,
        width=GRADUAL_WIDTH,
        length=LENGTH,
        noise=setup["noise"],
        seed=seed,
        balance_classes=setup["balance"],
        bins=setup["bins"],
        concept_size=CONCEPT_SIZE,
    )


def benchmark_suite(seed: int = 1) -> List[StreamSpec]:
    return [
        family_spec(family, drift_kind, order, seed)
        for drift_kind in ("abrupt", "gradual")
        for family in FAMILIES
        for order in (1, 2)
    ]


PRESETS = {"paper-suite": benchmark_suite}
