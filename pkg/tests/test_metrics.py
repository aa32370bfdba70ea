import numpy as np
import pytest

from cadrift.evaluation import (
    PrequentialTracker,
    ResourceMonitor,
    ResourceSample,
    prequential_accuracy,
    ram_hours,
    score_detections,
    segment_accuracies,
)
from cadrift.evaluation.metrics import acceptance_window, matthews

DRIFTS = [10000, 20000, 30000]


def test_prequential_accuracy_examples():
    assert prequential_accuracy([1, 1, 0, 1]) == pytest.approx(0.75)
    assert prequential_accuracy([1] * 10) == 1.0
    assert prequential_accuracy([0]) == 0.0
    assert prequential_accuracy([0, 0, 1, 1], t_ref=2) == 1.0
    assert prequential_accuracy([0, 0, 1, 1], t_ref=52, start=50) == 1.0


def test_prequential_accuracy_rejects_bad_reference():
    with pytest.raises(ValueError):
        prequential_accuracy([])
    with pytest.raises(ValueError):
        prequential_accuracy([1, 0], t_ref=2)
    with pytest.raises(ValueError):
        prequential_accuracy([1, 0], t_ref=49, start=50)


# The recursive running value equals the plain mean from t_ref
def test_prequential_recursion_equals_mean(rng):
    for _ in range(1000):
        n = int(rng.integers(1, 200))
        bits = rng.integers(0, 2, size=n)
        t_ref = int(rng.integers(0, n))
        value = prequential_accuracy(bits, t_ref=t_ref)
        assert abs(value - bits[t_ref:].mean()) <= 1e-12


def test_tracker_counts_steps():
    tracker = PrequentialTracker(t_ref=5)
    for bit in (1, 0, 1):
        tracker.update(bit)
    assert tracker.count == 3
    assert tracker.t == 7
    assert tracker.value == pytest.approx(2 / 3)


def test_segment_accuracies_restart_at_drifts():
    bits = [1, 1, 0, 0, 1, 1]
    assert segment_accuracies(bits, [12, 14], start=10) == [1.0, 0.0, 1.0]
    assert segment_accuracies(bits, [], start=10) == [pytest.approx(4 / 6)]


def test_acceptance_windows():
    assert acceptance_window("abrupt", 10000) == 200
    assert acceptance_window("gradual", 10000) == 1000


def test_score_all_detections_matched():
    score = score_detections([10050, 20120, 30190], DRIFTS, "abrupt", 10000, n_steps=39950)
    assert (score.tp, score.fp, score.fn) == (3, 0, 0)
    assert score.mu_d == 120.0
    assert score.precision == 1.0 and score.recall == 1.0
    assert score.tn == 39950 - 3
    assert score.mcc == 1.0


def test_score_without_detections():
    score = score_detections([], DRIFTS, "abrupt", 10000, n_steps=39950)
    assert score.tp == 0
    assert score.fn == 3
    assert score.mu_d == 1000.0
    assert score.mcc == 0.0
    assert score.precision == 0.0 and not score.precision_defined


def test_score_detection_outside_window_is_false_positive():
    score = score_detections([10250], [10000], "abrupt", 10000, n_steps=20000)
    assert (score.tp, score.fp, score.fn) == (0, 1, 1)
    # the window is inclusive at both ends
    assert score_detections([10200], [10000], "abrupt", 10000).tp == 1
    assert score_detections([9999], [10000], "abrupt", 10000).fp == 1


def test_score_extra_detections_in_a_window_are_false_positives():
    score = score_detections([10010, 10020, 20500], [10000, 20000], "gradual", 10000, n_steps=30000)
    assert (score.tp, score.fp, score.fn) == (2, 1, 0)
    assert score.mu_d == pytest.approx((10 + 500) / 2)
    assert score.matches == [(10000, 10010), (20000, 20500)]


# tp + fn is the drift count; every detection is either tp or fp
def test_score_conservation(rng):
    for _ in range(200):
        detections = sorted(set(rng.integers(0, 40000, size=int(rng.integers(0, 20))).tolist()))
        score = score_detections(detections, DRIFTS, "abrupt", 10000, n_steps=40000)
        assert score.tp + score.fn == len(DRIFTS)
        assert score.tp + score.fp == len(detections)
        if detections:
            assert score.precision == score.tp / (score.tp + score.fp)
        assert score.recall == score.tp / 3
        assert -1.0 <= score.mcc <= 1.0


def test_matthews_degenerate_factors():
    assert matthews(0, 0, 3, 100) == 0.0
    assert matthews(3, 0, 0, 0) == 0.0
    assert matthews(2, 1, 1, 10) == pytest.approx((20 - 1) / np.sqrt(3 * 3 * 11 * 11))


def test_ram_hours():
    one_gb = 1024 ** 3
    hour = [ResourceSample(step=0, elapsed=0, rss=one_gb), ResourceSample(step=1, elapsed=3600, rss=one_gb)]
    assert ram_hours(hour) == pytest.approx(1.0)
    two_hours = [
        ResourceSample(step=0, elapsed=0, rss=one_gb // 2),
        ResourceSample(step=1, elapsed=7200, rss=one_gb // 2),
    ]
    assert ram_hours(two_hours) == pytest.approx(1.0)
    instant = [ResourceSample(step=0, elapsed=5, rss=one_gb), ResourceSample(step=1, elapsed=5, rss=one_gb)]
    assert ram_hours(instant) == 0.0


def test_ram_hours_without_samples_warns(caplog):
    assert ram_hours([]) == 0.0
    assert "No resource samples" in caplog.text


def test_resource_monitor_samples_on_cadence():
    monitor = ResourceMonitor(every=10)
    for step in range(1, 31):
        monitor.tick(step)
    assert [s.step for s in monitor.samples] == [10, 20, 30]
    assert all(s.rss > 0 for s in monitor.samples)
    with pytest.raises(ValueError):
        ResourceMonitor(every=0)
