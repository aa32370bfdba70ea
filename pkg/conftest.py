import numpy as np
import pytest

from cadrift.streams import ConceptFunction, StreamSpec, generate
from cadrift.streams.stream import Stream


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


# A short abrupt sine stream: SINE1 then reversed SINE1 at t=1000
@pytest.fixture
def sine_spec():
    return StreamSpec(
        name="sine_small",
        concepts=[
            ConceptFunction(kind="sine", function=1),
            ConceptFunction(kind="sine", function=1, reversed=True),
        ],
        positions=[1000],
        length=2000,
        concept_size=1000,
        balance_classes=True,
        seed=7,
    )


@pytest.fixture
def sine_stream(sine_spec):
    return generate(sine_spec)


# Stationary, perfectly separable stream: class 1 iff the first feature exceeds 0.5
@pytest.fixture
def separable_stream():
    rng = np.random.default_rng(3)
    X = rng.random((600, 2))
    y = (X[:, 0] > 0.5).astype(int)
    return Stream(X=X, y=y, name="separable", concept_size=600, seed=3)
