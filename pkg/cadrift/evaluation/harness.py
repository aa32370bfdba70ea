"""
The learning-detection loop: test-then-train a base learner while a drift
detector watches, and re-prepare both from the recent window on every
detection.
"""
import logging
from collections import deque
from pathlib import Path
from typing import Callable, List, Optional

import numpy as np
from pydantic import Field, field_validator

from .metrics import DetectionScore, prequential_accuracy, ram_hours, score_detections, segment_accuracies
from .resources import ResourceMonitor, ResourceSample
from cadrift import settings
from cadrift.detectors.base import DriftDetector, SignalMapping
from cadrift.learners.base import IncrementalLearner
from cadrift.pydantic.fields import BitVector
from cadrift.pydantic.models import BaseModel
from cadrift.streams.stream import Stream

logger = logging.getLogger(__name__)

SnapshotHook = Callable[[DriftDetector, int, str], None]


class RunResult(BaseModel):
    scheme_id: str
    learner: str
    detector: str
    stream: str
    seed: Optional[int] = None
    prep_size: int
    # correct[i] is the test-then-train outcome of step prep_size + i
    correct: BitVector
    detections: List[int] = Field(default_factory=list)
    warnings: int = 0
    true_drifts: List[int] = Field(default_factory=list)
    drift_kind: str = "abrupt"
    concept_size: int = settings.DEFAULT_CONCEPT_SIZE
    samples: List[ResourceSample] = Field(default_factory=list)
    wall_seconds: float = 0.0

    @field_validator("detections")
    @classmethod
    def check_increasing(cls, value: List[int]) -> List[int]:
        if any(b <= a for a, b in zip(value, value[1:])):
            raise ValueError("detection times must be strictly increasing")
        return value

    @property
    def n_steps(self) -> int:
        return len(self.correct)

    def accuracy(self, t_ref: Optional[int] = None) -> float:
        t_ref = self.prep_size if t_ref is None else t_ref
        return prequential_accuracy(self.correct, t_ref=t_ref, start=self.prep_size)

    def segment_accuracies(self) -> List[Optional[float]]:
        return segment_accuracies(self.correct, self.true_drifts, start=self.prep_size)

    def score(self) -> DetectionScore:
        return score_detections(
            self.detections,
            self.true_drifts,
            drift_kind=self.drift_kind,
            concept_size=self.concept_size,
            n_steps=self.n_steps,
        )

    def ram_hours(self) -> float:
        return ram_hours(self.samples)

    def row(self) -> dict:
        """Flat record for the results table."""
        score = self.score()
        return {
            "scheme_id": self.scheme_id,
            "learner": self.learner,
            "detector": self.detector,
            "stream": self.stream,
            "seed": self.seed,
            "pacc": self.accuracy(),
            "tp": score.tp,
            "fp": score.fp,
            "fn": score.fn,
            "tn": score.tn,
            "precision": score.precision,
            "recall": score.recall,
            "mcc": score.mcc,
            "mu_d": score.mu_d,
            "warnings": self.warnings,
            "ram_hours": self.ram_hours(),
            "wall_seconds": self.wall_seconds,
        }


def scheme_id(learner: str, detector: str, stream: str) -> str:
    return f"{learner}-{detector}-{stream}"


def _check_dimensions(stream: Stream, learner: IncrementalLearner, detector: DriftDetector) -> None:
    expected = getattr(learner, "n_features", None)
    if expected is not None and expected != stream.n_features:
        raise ValueError(
            f"{learner.name} was fitted on {expected} features, stream {stream.name!r} has {stream.n_features}"
        )
    grid = getattr(detector, "grid", None)
    if grid is not None and grid.config.d != stream.n_features:
        raise ValueError(
            f"{detector.name} grid has {grid.config.d} dimensions, stream {stream.name!r} has {stream.n_features}"
        )


def run_scheme(
    learner: IncrementalLearner,
    detector: DriftDetector,
    stream: Stream,
    prep_size: int = settings.DEFAULT_PREP_SIZE,
    signal: Optional[SignalMapping] = None,
    seed: Optional[int] = None,
    sample_every: int = 1000,
    snapshot_every: Optional[int] = None,
    snapshot_hook: Optional[SnapshotHook] = None,
) -> RunResult:
    """
    Prepare on the first ``prep_size`` instances, then for every later step:
    push the instance into the window, predict, train, feed the detector
    (``(x, y)`` for detectors that consume instances, the error signal
    otherwise) and, on a detected change, re-prepare from the window.

    ``snapshot_hook(detector, t, reason)`` is called every ``snapshot_every``
    steps and on every detection, for detectors that can be snapshotted.
    """
    if len(stream) <= prep_size:
        raise ValueError(
            f"stream {stream.name!r} has {len(stream)} instances, need more than prep_size={prep_size}"
        )
    _check_dimensions(stream, learner, detector)
    signal = signal or SignalMapping()
    monitor = ResourceMonitor(every=sample_every)
    snapshots = snapshot_hook is not None and hasattr(detector, "grid")
    if snapshots:
        detector.snapshot_on_drift = True

    window: deque = deque(maxlen=prep_size)
    window.extend((stream.X[t], int(stream.y[t])) for t in range(prep_size))
    learner.fit_window(window)
    if detector.consumes_instances:
        detector.prepare(window)
    monitor.sample(prep_size)

    n = len(stream)
    correct = np.zeros(n - prep_size, dtype=bool)
    detections: List[int] = []
    warnings = 0
    for t in range(prep_size, n):
        x, y = stream.X[t], int(stream.y[t])
        window.append((x, y))
        predicted = learner.predict(x)
        correct[t - prep_size] = predicted == y
        learner.partial_fit(x, y)

        if detector.consumes_instances:
            detector.update(x, y)
        else:
            wire = signal.encode(predicted != y)
            detector.add_element(signal.decode(wire))
        if detector.detected_warning():
            warnings += 1
        if detector.detected_change():
            detections.append(t)
            logger.debug("%s flagged a drift at t=%d on %s", detector.name, t, stream.name)
            if snapshots and getattr(detector, "drift_snapshot", None) is not None:
                snapshot_hook(detector, t, "drift")
            # CURIE already rebuilt its grid from the window
            if not detector.consumes_instances:
                detector.reset()
            learner.fit_window(window)
        if snapshots and snapshot_every and (t + 1) % snapshot_every == 0:
            snapshot_hook(detector, t, "periodic")
        monitor.tick(t + 1)
    monitor.sample(n)

    return RunResult(
        scheme_id=scheme_id(learner.name, detector.name, stream.name),
        learner=learner.name,
        detector=detector.name,
        stream=stream.name,
        seed=seed if seed is not None else stream.seed,
        prep_size=prep_size,
        correct=correct,
        detections=detections,
        warnings=warnings,
        true_drifts=list(stream.drift_positions),
        drift_kind=stream.drift_kind,
        concept_size=stream.concept_size or settings.DEFAULT_CONCEPT_SIZE,
        samples=monitor.samples,
        wall_seconds=monitor.elapsed(),
    )


def directory_snapshot_hook(directory: Path, prefix: str) -> SnapshotHook:
    """Hook writing ``<prefix>_t<step>_<reason>.jsonl`` files under ``directory``."""
    from cadrift.snapshot import detector_snapshot, write_snapshot

    def hook(detector: DriftDetector, t: int, reason: str) -> None:
        if reason == "drift":
            snapshot = detector.drift_snapshot
        else:
            snapshot = detector_snapshot(detector)
        write_snapshot(snapshot, Path(directory) / f"{prefix}_t{t}_{reason}.jsonl")

    return hook
