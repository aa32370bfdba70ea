from .harness import RunResult, run_scheme, scheme_id
from .metrics import (
    DetectionScore,
    PrequentialTracker,
    prequential_accuracy,
    ram_hours,
    score_detections,
    segment_accuracies,
)
from .ranking import RankTable, critical_difference, friedman_nemenyi, q_alpha, rank_results
from .resources import ResourceMonitor, ResourceSample

__all__ = [
    "DetectionScore",
    "PrequentialTracker",
    "RankTable",
    "ResourceMonitor",
    "ResourceSample",
    "RunResult",
    "critical_difference",
    "friedman_nemenyi",
    "prequential_accuracy",
    "q_alpha",
    "ram_hours",
    "rank_results",
    "run_scheme",
    "scheme_id",
    "score_detections",
    "segment_accuracies",
]
