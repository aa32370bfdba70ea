from typing import Union

from pydantic import Field
from typing_extensions import Annotated

from .base import IncrementalLearner
from .knn import KnnConfig, SlidingWindowKNN
from .naive_bayes import GaussianNaiveBayes, NaiveBayesConfig

LearnerConfig = Annotated[
    Union[NaiveBayesConfig, KnnConfig],
    Field(discriminator="kind"),
]

LEARNER_NAMES = {
    "nb": GaussianNaiveBayes.name,
    "knn": SlidingWindowKNN.name,
}


def build_learner(config) -> IncrementalLearner:
    return config.build()


__all__ = [
    "GaussianNaiveBayes",
    "IncrementalLearner",
    "KnnConfig",
    "LEARNER_NAMES",
    "LearnerConfig",
    "NaiveBayesConfig",
    "SlidingWindowKNN",
    "build_learner",
]
