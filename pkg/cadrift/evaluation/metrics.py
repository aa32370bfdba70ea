"""Prequential accuracy, detection scoring and RAM-Hours."""
import logging
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np
from pydantic import Field
from scipy.integrate import trapezoid

from cadrift import settings
from cadrift.pydantic.models import BaseModel

logger = logging.getLogger(__name__)


class PrequentialTracker:
    """
    Running prequential accuracy since ``t_ref``: after the bit of step ``t``
    the value is ``previous + (bit - previous) / (t - t_ref + 1)``.
    """

    def __init__(self, t_ref: int = 0):
        self.t_ref = t_ref
        self.t = t_ref - 1
        self.value = 0.0

    @property
    def count(self) -> int:
        return self.t - self.t_ref + 1

    def update(self, bit) -> float:
        self.t += 1
        self.value += (float(bit) - self.value) / self.count
        return self.value


def prequential_accuracy(bits: Sequence, t_ref: int = 0, start: int = 0) -> float:
    """
    pACC of ``bits`` counted from step ``t_ref``. ``bits[i]`` is the
    correctness of step ``start + i``.
    """
    if len(bits) == 0:
        raise ValueError("no correctness bits to average")
    if not start <= t_ref < start + len(bits):
        raise ValueError(
            f"t_ref={t_ref} is outside the evaluated steps [{start}, {start + len(bits) - 1}]"
        )
    tracker = PrequentialTracker(t_ref)
    for bit in bits[t_ref - start:]:
        tracker.update(bit)
    return tracker.value


def segment_accuracies(
    bits: Sequence, boundaries: Sequence[int], start: int = 0
) -> List[Optional[float]]:
    """pACC restarted at every boundary (true drift); ``None`` for segments with no step."""
    edges = [start] + [b for b in boundaries if start < b < start + len(bits)]
    edges.append(start + len(bits))
    values = []
    for begin, end in zip(edges, edges[1:]):
        if end <= begin:
            values.append(None)
            continue
        values.append(prequential_accuracy(bits[: end - start], t_ref=begin, start=start))
    return values


class DetectionScore(BaseModel):
    tp: int = 0
    fp: int = 0
    fn: int = 0
    tn: int = 0
    precision: float = 0.0
    recall: float = 0.0
    mcc: float = 0.0
    mu_d: float = settings.MU_D_WITHOUT_TP
    # False when the ratio had a zero denominator and was reported as 0
    precision_defined: bool = True
    recall_defined: bool = True
    matches: List[Tuple[int, int]] = Field(default_factory=list)


def acceptance_window(drift_kind: str, concept_size: int = settings.DEFAULT_CONCEPT_SIZE) -> int:
    fraction = (
        settings.GRADUAL_WINDOW_FRACTION
        if drift_kind == "gradual"
        else settings.ABRUPT_WINDOW_FRACTION
    )
    return int(round(fraction * concept_size))


def matthews(tp: int, fp: int, fn: int, tn: int) -> float:
    factors = [tp + fp, tp + fn, tn + fp, tn + fn]
    if any(f == 0 for f in factors):
        return 0.0
    denominator = math.sqrt(float(factors[0]) * factors[1] * factors[2] * factors[3])
    return (float(tp) * tn - float(fp) * fn) / denominator


def score_detections(
    detections: Sequence[int],
    true_drifts: Sequence[int],
    drift_kind: str = "abrupt",
    concept_size: int = settings.DEFAULT_CONCEPT_SIZE,
    n_steps: Optional[int] = None,
) -> DetectionScore:
    """
    Match detections to true drifts in time order. A detection ``d`` is the
    true positive of drift ``p`` when ``0 <= d - p <= window`` and ``p`` has
    no earlier match; every other detection is a false positive. ``n_steps``
    is the number of evaluated steps used for the true negatives; when
    omitted it is the span up to the last drift or detection.
    """
    window = acceptance_window(drift_kind, concept_size)
    drifts = sorted(true_drifts)
    matched = [False] * len(drifts)
    matches: List[Tuple[int, int]] = []
    fp = 0
    for d in sorted(detections):
        for index, p in enumerate(drifts):
            if not matched[index] and 0 <= d - p <= window:
                matched[index] = True
                matches.append((p, d))
                break
        else:
            fp += 1
    tp = len(matches)
    fn = len(drifts) - tp
    if n_steps is None:
        n_steps = max(list(detections) + drifts + [-1]) + 1
    tn = max(n_steps - tp - fp - fn, 0)

    precision_defined = tp + fp > 0
    recall_defined = len(drifts) > 0
    return DetectionScore(
        tp=tp,
        fp=fp,
        fn=fn,
        tn=tn,
        precision=tp / (tp + fp) if precision_defined else 0.0,
        recall=tp / len(drifts) if recall_defined else 0.0,
        mcc=matthews(tp, fp, fn, tn),
        mu_d=float(np.mean([d - p for p, d in matches])) if matches else settings.MU_D_WITHOUT_TP,
        precision_defined=precision_defined,
        recall_defined=recall_defined,
        matches=matches,
    )


def ram_hours(samples) -> float:
    """
    Integral of resident memory (GB) over elapsed time (hours), trapezoidal
    over the samples. Accepts a ``RunResult`` or a sequence of samples.
    """
    samples = getattr(samples, "samples", samples)
    if not samples:
        logger.warning("No resource samples recorded, RAM-Hours reported as 0")
        return 0.0
    hours = np.asarray([s.elapsed for s in samples], dtype=float) / 3600.0
    gigabytes = np.asarray([s.rss for s in samples], dtype=float) / settings.BYTES_PER_GB
    if len(samples) == 1:
        return 0.0
    return float(trapezoid(gigabytes, hours))
