"""
Experiment configuration: a JSON document validated into
``ExperimentConfig``. Runs are the cross product learners x detectors x
streams x seeds.
"""
import json
from pathlib import Path
from typing import Any, Dict, Iterable, List, Literal, Optional, Tuple, Union

from pydantic import Discriminator, Field, Tag, ValidationError, model_validator
from typing_extensions import Annotated

from cadrift import settings
from cadrift.detectors import (
    AdwinConfig,
    CurieConfig,
    DdmConfig,
    DetectorConfig,
    EddmConfig,
    PageHinkleyConfig,
)
from cadrift.exceptions import ImproperlyConfigured
from cadrift.learners import KnnConfig, LearnerConfig, NaiveBayesConfig
from cadrift.pydantic.fields import SeedList
from cadrift.pydantic.models import BaseModel
from cadrift.streams import PRESETS, CsvStreamSource, StreamSpec
from cadrift.utils.pydantic import errors_to_detail
from cadrift.utils.setter import apply_overrides


def stream_source_kind(value: Any) -> str:
    """Generated streams may leave out ``source``."""
    if isinstance(value, dict):
        return value.get("source", "generator")
    return getattr(value, "source", "generator")


StreamSource = Annotated[
    Union[
        Annotated[StreamSpec, Tag("generator")],
        Annotated[CsvStreamSource, Tag("csv")],
    ],
    Discriminator(stream_source_kind),
]

Metric = Literal["pacc", "mcc", "mu_d", "ram_hours", "precision", "recall"]


def default_detectors() -> List[Any]:
    return [DdmConfig(), EddmConfig(), AdwinConfig(), PageHinkleyConfig(), CurieConfig()]


def default_learners() -> List[Any]:
    return [NaiveBayesConfig(), KnnConfig()]


class ExperimentConfig(BaseModel):
    preset: Optional[Literal["paper-suite"]] = None
    streams: List[StreamSource] = Field(default_factory=list)
    learners: List[LearnerConfig] = Field(default_factory=default_learners, min_length=1)
    detectors: List[DetectorConfig] = Field(default_factory=default_detectors, min_length=1)
    prep_size: int = Field(default=settings.DEFAULT_PREP_SIZE, ge=1)
    seeds: SeedList = Field(default_factory=lambda: SeedList([1]))
    metrics: List[Metric] = Field(default_factory=lambda: ["pacc", "mcc", "mu_d", "ram_hours"])
    output_dir: Path = Path("results")
    sample_every: int = Field(default=1000, ge=1)
    snapshot_every: Optional[int] = Field(default=None, ge=1)
    parallel: int = Field(default=1, ge=1)
    signal_convention: Literal["canonical", "literal"] = "canonical"
    alpha: float = Field(default=0.05, gt=0, lt=1)

    @model_validator(mode="after")
    def check_runs(self) -> "ExperimentConfig":
        for group, configs in (("learner", self.learners), ("detector", self.detectors)):
            kinds = [c.kind for c in configs]
            if len(set(kinds)) != len(kinds):
                raise ValueError(f"each {group} kind may appear once, got {kinds}")
        if not self.streams and self.preset is None:
            raise ValueError("declare at least one stream or a preset")
        labels = [source.label for source in self.all_streams()]
        duplicated = sorted({label for label in labels if labels.count(label) > 1})
        if duplicated:
            raise ValueError(f"stream names must be unique, repeated: {duplicated}")
        for source in self.all_streams():
            if isinstance(source, StreamSpec) and source.length <= self.prep_size:
                raise ValueError(
                    f"stream {source.name!r} has {source.length} instances, need more than prep_size={self.prep_size}"
                )
        return self

    def all_streams(self) -> List[Union[StreamSpec, CsvStreamSource]]:
        preset = PRESETS[self.preset]() if self.preset else []
        return list(preset) + list(self.streams)

    def runs(self) -> Iterable[Tuple[Any, int, Any, Any]]:
        """(stream source, seed, learner config, detector config) for every run."""
        for source in self.all_streams():
            for seed in self.seeds:
                for learner in self.learners:
                    for detector in self.detectors:
                        yield source, seed, learner, detector

    @property
    def n_runs(self) -> int:
        return len(self.all_streams()) * len(self.seeds) * len(self.learners) * len(self.detectors)


def validate_config(data: Dict[str, Any]) -> ExperimentConfig:
    try:
        return ExperimentConfig.validate_python(data)
    except ValidationError as exc:
        raise ImproperlyConfigured(
            f"Invalid experiment configuration ({exc.error_count()} errors)",
            detail=errors_to_detail(exc),
        ) from exc


def load_config(
    path: Optional[Union[str, Path]] = None,
    overrides: Iterable[Tuple[str, Any]] = (),
    base: Optional[Dict[str, Any]] = None,
) -> ExperimentConfig:
    """
    Read ``path`` (JSON), apply dotted-path ``overrides`` on top of it and
    validate. Without a path the document starts from ``base`` (or empty).
    """
    data: Dict[str, Any] = dict(base or {})
    if path is not None:
        path = Path(path)
        try:
            document = json.loads(path.read_text())
        except FileNotFoundError as exc:
            raise ImproperlyConfigured(f"Config file {path} does not exist") from exc
        except json.JSONDecodeError as exc:
            raise ImproperlyConfigured(
                f"Config file {path} is not valid JSON: line {exc.lineno}: {exc.msg}"
            ) from exc
        if not isinstance(document, dict):
            raise ImproperlyConfigured(f"Config file {path} must hold a JSON object")
        data.update(document)
    try:
        data = apply_overrides(data, overrides)
    except ValueError as exc:
        raise ImproperlyConfigured(f"Cannot apply override: {exc}") from exc
    return validate_config(data)
