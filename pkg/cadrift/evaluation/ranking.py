"""Friedman test over per-dataset ranks with the Nemenyi critical difference."""
import itertools
import logging
import math
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from pydantic import Field
from scipy.stats import chi2, f, rankdata, studentized_range

from cadrift.pydantic.models import BaseModel

logger = logging.getLogger(__name__)

# Metrics where a smaller score ranks better.
LOWER_IS_BETTER = frozenset({"mu_d", "ram_hours", "wall_seconds", "fp", "fn"})


@lru_cache(maxsize=None)
def q_alpha(k: int, alpha: float = 0.05) -> float:
    """Two-tailed Nemenyi value: the studentized range quantile over sqrt(2)."""
    if k < 2:
        raise ValueError("the Nemenyi test needs at least two detectors")
    return float(studentized_range.ppf(1.0 - alpha, k, np.inf) / math.sqrt(2.0))


def critical_difference(k: int, n_datasets: int, alpha: float = 0.05) -> float:
    return q_alpha(k, alpha) * math.sqrt(k * (k + 1) / (6.0 * n_datasets))


class RankTable(BaseModel):
    metric: str = ""
    alpha: float = 0.05
    detectors: List[str]
    datasets: List[str]
    # ranks[i][j]: rank of detector i on dataset j (1 = best)
    ranks: List[List[float]]
    mean_ranks: Dict[str, float]
    chi2: float
    chi2_pvalue: float
    f_stat: float
    f_pvalue: float
    cd: float
    significant_pairs: List[Tuple[str, str]] = Field(default_factory=list)

    @property
    def rejects_null(self) -> bool:
        return self.f_pvalue < self.alpha

    def ordered(self) -> List[Tuple[str, float]]:
        return sorted(self.mean_ranks.items(), key=lambda item: (item[1], item[0]))

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame(
            [(name, rank) for name, rank in self.ordered()],
            columns=["detector", "mean_rank"],
        )
        frame["metric"] = self.metric
        frame["cd"] = self.cd
        return frame

    def render(self) -> str:
        lines = [f"{self.metric or 'score'}: CD={self.cd:.6f} (alpha={self.alpha}, N={len(self.datasets)})"]
        for name, rank in self.ordered():
            lines.append(f"  {name:<8} {rank:.4f}")
        lines.append(
            f"  Friedman chi2={self.chi2:.4f} p={self.chi2_pvalue:.4g}; "
            f"F={self.f_stat:.4f} p={self.f_pvalue:.4g}"
        )
        for a, b in self.significant_pairs:
            lines.append(f"  {a} and {b} differ by more than CD")
        return "\n".join(lines) + "\n"


def friedman_nemenyi(
    scores,
    alpha: float = 0.05,
    higher_is_better: bool = True,
    detectors: Optional[Sequence[str]] = None,
    datasets: Optional[Sequence[str]] = None,
    metric: str = "",
) -> RankTable:
    """
    ``scores`` is a detectors x datasets matrix (array or DataFrame indexed by
    detector). Ranks are computed per dataset with average ranks on ties.
    """
    if isinstance(scores, pd.DataFrame):
        detectors = detectors or [str(i) for i in scores.index]
        datasets = datasets or [str(c) for c in scores.columns]
        scores = scores.to_numpy(dtype=float)
    matrix = np.asarray(scores, dtype=float)
    if matrix.ndim != 2:
        raise ValueError("scores must be a detectors x datasets matrix")
    k, n = matrix.shape
    if k < 2 or n < 2:
        raise ValueError(f"need at least 2 detectors and 2 datasets, got {k} x {n}")
    if np.isnan(matrix).any():
        raise ValueError("scores contain missing values")
    detectors = list(detectors or [f"D{i}" for i in range(k)])
    datasets = list(datasets or [f"S{j}" for j in range(n)])

    oriented = -matrix if higher_is_better else matrix
    ranks = rankdata(oriented, axis=0)
    mean = ranks.mean(axis=1)

    statistic = 12.0 * n / (k * (k + 1)) * (np.sum(mean ** 2) - k * (k + 1) ** 2 / 4.0)
    statistic = max(float(statistic), 0.0)
    chi2_pvalue = float(chi2.sf(statistic, k - 1))
    denominator = n * (k - 1) - statistic
    if denominator <= 0:
        f_stat, f_pvalue = math.inf, 0.0
    else:
        f_stat = (n - 1) * statistic / denominator
        f_pvalue = float(f.sf(f_stat, k - 1, (k - 1) * (n - 1)))

    cd = critical_difference(k, n, alpha)
    pairs = [
        (detectors[a], detectors[b])
        for a, b in itertools.combinations(range(k), 2)
        if abs(mean[a] - mean[b]) > cd
    ]
    table = RankTable(
        metric=metric,
        alpha=alpha,
        detectors=detectors,
        datasets=datasets,
        ranks=ranks.tolist(),
        mean_ranks={name: float(value) for name, value in zip(detectors, mean)},
        chi2=statistic,
        chi2_pvalue=chi2_pvalue,
        f_stat=f_stat,
        f_pvalue=f_pvalue,
        cd=cd,
        significant_pairs=pairs,
    )
    if table.rejects_null:
        logger.info("Friedman test rejects equal performance on %s (p=%.4g)", metric or "scores", f_pvalue)
    else:
        logger.info("Friedman test cannot reject equal performance on %s (p=%.4g)", metric or "scores", f_pvalue)
    return table


def score_matrix(results: pd.DataFrame, metric: str, by: str = "detector") -> pd.DataFrame:
    """
    Mean ``metric`` per (``by``, stream), averaged over learners and seeds,
    as a ``by`` x stream matrix. Streams missing a score for any row are dropped.
    """
    pivot = results.pivot_table(index=by, columns="stream", values=metric, aggfunc="mean")
    return pivot.dropna(axis=1)


def rank_results(results: pd.DataFrame, metrics: Sequence[str], alpha: float = 0.05) -> Dict[str, RankTable]:
    tables = {}
    for metric in metrics:
        matrix = score_matrix(results, metric)
        if matrix.shape[0] < 2 or matrix.shape[1] < 2:
            logger.warning(
                "Skipping %s ranking: %d detectors x %d streams is too small",
                metric,
                matrix.shape[0],
                matrix.shape[1],
            )
            continue
        tables[metric] = friedman_nemenyi(
            matrix,
            alpha=alpha,
            higher_is_better=metric not in LOWER_IS_BETTER,
            metric=metric,
        )
    return tables
