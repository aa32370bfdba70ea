import numpy as np
import pandas as pd
import pytest

from cadrift.evaluation import critical_difference, friedman_nemenyi, q_alpha
from cadrift.evaluation.ranking import rank_results, score_matrix


# Five detectors over twenty datasets at alpha = 0.05
def test_critical_difference_constant():
    assert critical_difference(5, 20, 0.05) == pytest.approx(1.363887, abs=1e-6)
    table = friedman_nemenyi(np.random.default_rng(0).random((5, 20)))
    assert table.cd == pytest.approx(1.363887, abs=1e-6)


def test_q_alpha_known_values():
    assert q_alpha(2) == pytest.approx(1.960, abs=1e-3)
    assert q_alpha(5) == pytest.approx(2.728, abs=1e-3)
    with pytest.raises(ValueError):
        q_alpha(1)


def test_strictly_best_detector_has_rank_one():
    scores = np.array([[0.9] * 6, [0.5] * 6, [0.1] * 6])
    table = friedman_nemenyi(scores, detectors=["CURIE", "ADWIN", "DDM"])
    assert table.mean_ranks == {"CURIE": 1.0, "ADWIN": 2.0, "DDM": 3.0}
    assert table.ordered()[0] == ("CURIE", 1.0)


def test_lower_is_better_flips_ranks():
    scores = np.array([[100.0, 200.0], [900.0, 800.0]])
    table = friedman_nemenyi(scores, higher_is_better=False)
    assert table.mean_ranks == {"D0": 1.0, "D1": 2.0}


def test_ties_get_average_ranks():
    scores = np.array([[0.5, 0.7], [0.5, 0.6], [0.1, 0.9]])
    table = friedman_nemenyi(scores)
    assert [row[0] for row in table.ranks] == [1.5, 1.5, 3.0]
    assert [row[1] for row in table.ranks] == [2.0, 3.0, 1.0]


def test_friedman_statistics():
    rng = np.random.default_rng(4)
    scores = np.vstack([rng.random(20) + shift for shift in (0.0, 0.3, 0.6, 0.9, 1.2)])
    table = friedman_nemenyi(scores, detectors=["A", "B", "C", "D", "E"])
    ranks = np.array(table.ranks)
    k, n = ranks.shape
    mean = ranks.mean(axis=1)
    chi2 = 12 * n / (k * (k + 1)) * (np.sum(mean ** 2) - k * (k + 1) ** 2 / 4)
    assert table.chi2 == pytest.approx(chi2)
    assert table.f_stat == pytest.approx((n - 1) * chi2 / (n * (k - 1) - chi2))
    assert table.rejects_null
    assert ("A", "E") in table.significant_pairs


def test_rejects_small_or_missing_scores():
    with pytest.raises(ValueError):
        friedman_nemenyi(np.ones((1, 5)))
    with pytest.raises(ValueError):
        friedman_nemenyi(np.ones((3, 1)))
    with pytest.raises(ValueError):
        friedman_nemenyi(np.array([[1.0, np.nan], [0.0, 1.0]]))


def test_rank_results_from_frame():
    rows = []
    for detector, base in (("CURIE", 0.9), ("DDM", 0.5), ("PH", 0.7)):
        for stream in ("s1", "s2", "s3"):
            for learner in ("NB", "KNN"):
                rows.append(
                    {
                        "detector": detector,
                        "learner": learner,
                        "stream": stream,
                        "mcc": base,
                        "mu_d": 1000 * (1 - base),
                    }
                )
    frame = pd.DataFrame(rows)
    assert score_matrix(frame, "mcc").shape == (3, 3)
    tables = rank_results(frame, ["mcc", "mu_d"])
    assert tables["mcc"].mean_ranks["CURIE"] == 1.0
    assert tables["mu_d"].mean_ranks["CURIE"] == 1.0
    assert "CURIE" in tables["mcc"].render()
